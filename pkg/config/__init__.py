"""Process-wide settings (QLW_* environment variables, .env file)."""

from .settings import settings, Settings

__all__ = ["settings", "Settings"]
