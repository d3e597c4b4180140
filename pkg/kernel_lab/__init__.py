from .pipeline import AnalysisConfig, PipelineRunner
from .orchestrator import analyze_file, export_gallery, run_galleries, run_gallery

__all__ = ["AnalysisConfig", "PipelineRunner", "analyze_file", "export_gallery", "run_galleries", "run_gallery"]
