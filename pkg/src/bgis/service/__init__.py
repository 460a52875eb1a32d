from .app import Services, build_services, create_app
from .auth import ROLE_ACTIONS, ROLES, AuthService, Session, authorize
from .config import ServiceConfig, load_zone_map

__all__ = [
    "Services", "build_services", "create_app",
    "ROLE_ACTIONS", "ROLES", "AuthService", "Session", "authorize",
    "ServiceConfig", "load_zone_map",
]
