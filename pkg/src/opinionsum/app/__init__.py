"""Pipeline composition, HTTP service, and command-line entry points."""

from .bundle import PipelineBundle, run_summarize

__all__ = ["PipelineBundle", "run_summarize"]
