"""FastAPI service wrapping the pipeline."""

from agestack.service.app import create_app

__all__ = ["create_app"]
