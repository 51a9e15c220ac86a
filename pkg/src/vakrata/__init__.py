# ───────────────────────── src/vakrata/__init__.py ─────────────────────────
"""Vakrata package root."""
__all__ = [
     "errors",
     "expr",
     "jets",
     "tensors",
     "curvature",
     "static_tensors",
     "metric",
     "residuals",
     "catalog",
     "identities",
     "harness",
     "report",
     "config",
     "utils",
     "progress",
     "cli",
     ]
