from loguru import logger

# configuration objects
from core.config import LOGGER_SETTINGS


class ModuleLoger:
    rotation = LOGGER_SETTINGS.rotation
    retention = LOGGER_SETTINGS.retention
    compress = LOGGER_SETTINGS.compression
    level = LOGGER_SETTINGS.level
    format = LOGGER_SETTINGS.format

    def __init__(self, model_name):
        # one log file per module, e.g. logs/lbfgs_optimizer.log
        self.__model_name = model_name
        self.__logger = logger.bind(object_type=model_name)
        if LOGGER_SETTINGS.to_file:
            self.setup_logger(LOGGER_SETTINGS.log_dir / f"{model_name}.log")

    def setup_logger(self, filename):
        """Add a file sink that only accepts records bound to this module."""

        def module_filter(record):
            return record["extra"].get("object_type") == self.__model_name

        self.__logger.add(
            filename,
            rotation=self.rotation,
            retention=self.retention,
            compression=self.compress,
            level=self.level,
            format=self.format,
            filter=module_filter,
        )

    def bind(self, **kwargs):
        return self.__logger.bind(**kwargs)

    def debug(self, *args, **kwargs):
        self.__logger.debug(*args, **kwargs)

    def info(self, *args, **kwargs):
        self.__logger.info(*args, **kwargs)

    def warning(self, *args, **kwargs):
        self.__logger.warning(*args, **kwargs)

    def error(self, *args, **kwargs):
        self.__logger.error(*args, **kwargs)
