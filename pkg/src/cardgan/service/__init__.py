from .app import create_app
from .config import ServiceConfig
from .archives import LatentArchive

__all__ = ["LatentArchive", "ServiceConfig", "create_app"]
