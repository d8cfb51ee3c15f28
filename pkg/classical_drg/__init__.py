from typing import Mapping

from classical_drg.settings import Config, set_global_config

__version__ = "0.1.0"

__all__ = (
    "__version__",
    "setup_classical_drg",
)


def setup_classical_drg(conf: Mapping = None) -> Config:
    user_settings = conf or {}
    app_settings = Config(**user_settings)
    set_global_config(app_settings)
    return app_settings
