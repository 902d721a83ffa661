"""λ reported as a ladder of per-level verdicts, with a versioned JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum

from IwasawaLambda.cyclolayer.certificate import CertificateReport
from IwasawaLambda.errors import InvariantError, PreconditionError
from IwasawaLambda.quadfield.gold import GoldReport

SCHEMA_VERSION = 1


class Status(StrEnum):
    PROVED = "PROVED"
    REFUTED = "REFUTED"
    NEEDS_CERTIFICATE = "NEEDS_CERTIFICATE"
    EXPERIMENTAL = "EXPERIMENTAL"


@dataclass(frozen=True)
class Verdict:
    level: int
    status: Status
    note: str = ""

    def to_json(self) -> dict:
        return {"level": self.level, "status": str(self.status), "note": self.note}


@dataclass
class LambdaReport:
    disc: int
    p: int
    s_count: int
    verdicts: list[Verdict] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def add(self, level: int, status: Status, note: str = "") -> None:
        if self.verdicts and level <= self.verdicts[-1].level:
            raise InvariantError("INTERNAL_INCONSISTENCY", "ladder levels must increase", level=level)
        if status == Status.PROVED and any(v.status == Status.REFUTED for v in self.verdicts):
            raise InvariantError("INTERNAL_INCONSISTENCY", "a level above a refuted one cannot be proved",
                                 level=level)
        self.verdicts.append(Verdict(level, status, note))

    @property
    def lower_bound(self) -> int:
        """The largest n with λ ≥ n proved at every level up to n."""
        bound = 0
        for v in self.verdicts:
            if v.status != Status.PROVED or v.level != bound + 1:
                break
            bound = v.level
        return bound

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "disc": self.disc,
            "p": self.p,
            "s_count": self.s_count,
            "lower_bound": self.lower_bound,
            "verdicts": [v.to_json() for v in self.verdicts],
            "details": self.details,
            "elapsed": self.elapsed,
        }

    @classmethod
    def from_json(cls, data: dict) -> LambdaReport:
        if data.get("schema") != SCHEMA_VERSION:
            raise PreconditionError("PARAMETER_MISMATCH", "unsupported report schema", schema=data.get("schema"))
        report = cls(int(data["disc"]), int(data["p"]), int(data["s_count"]), details=dict(data.get("details", {})),
                     elapsed=float(data.get("elapsed", 0.0)))
        for v in data["verdicts"]:
            report.add(int(v["level"]), Status(v["status"]), str(v.get("note", "")))
        return report

    def render(self) -> str:
        lines = [f"D = {self.disc}, p = {self.p}, #S = {self.s_count}"]
        for v in self.verdicts:
            suffix = f"  ({v.note})" if v.note else ""
            lines.append(f"  λ ≥ {v.level}: {v.status}{suffix}")
        lines.append(f"  proved lower bound: λ ≥ {self.lower_bound}")
        for key, value in self.details.items():
            lines.append(f"  {key}: {value}")
        return "\n".join(lines)


def from_gold(gold: GoldReport, elapsed: float = 0.0) -> LambdaReport:
    """Levels 1 and 2 from a Gold report; a proved level 2 leaves level 3 to a certificate."""
    report = LambdaReport(gold.disc, gold.p, gold.s_count, details=gold.to_dict(), elapsed=elapsed)
    if gold.experimental:
        verdict = "holds" if gold.lambda_ge_2 else "fails"
        report.add(2, Status.EXPERIMENTAL, f"local norm criterion {verdict}")
        return report
    report.add(1, Status.PROVED, "p splits in K")
    if gold.lambda_ge_2:
        report.add(2, Status.PROVED, "χ ∪ α = 0")
        report.add(3, Status.NEEDS_CERTIFICATE, "run verify with a β certificate")
    else:
        report.add(2, Status.REFUTED, "χ ∪ α ≠ 0")
    return report


def from_certificate(cert: CertificateReport, elapsed: float = 0.0) -> LambdaReport:
    report = LambdaReport(cert.disc, cert.p, 2, details=cert.to_dict(), elapsed=elapsed)
    report.add(1, Status.PROVED, "p splits in K")
    if cert.lambda_ge_2 is None:
        report.add(2, Status.EXPERIMENTAL, "α supplied by the certificate")
    elif cert.lambda_ge_2:
        report.add(2, Status.PROVED, "χ ∪ α = 0")
    else:
        report.add(2, Status.REFUTED, "χ ∪ α ≠ 0")
        return report
    if cert.lambda_ge_3:
        report.add(3, Status.PROVED, "χ ∪ α₁ = 0")
        report.add(4, Status.NEEDS_CERTIFICATE, "the λ ≥ 4 step is gated")
    else:
        report.add(3, Status.REFUTED, "χ ∪ α₁ ≠ 0")
    return report
