from .app import app, create_app
from .runner import render_text, run_query

__all__ = ["app", "create_app", "render_text", "run_query"]
