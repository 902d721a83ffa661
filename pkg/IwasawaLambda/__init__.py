from IwasawaLambda.logger import log

log.debug("IwasawaLambda package initialized")
