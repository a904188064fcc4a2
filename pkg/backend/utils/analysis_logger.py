"""
Analysis Logger
Provides detailed logging and reasoning tracking for analysis stages
"""

import sys
from typing import List, Dict, Any, Optional
from datetime import datetime


class AnalysisLogger:
    """Tracks detailed logs, reasoning, findings and metrics for one analysis stage"""

    def __init__(self, stage_name: Optional[str] = None, echo: bool = False):
        self.stage_name = stage_name or "Unknown Stage"
        self.echo = echo
        self.logs: List[Dict[str, Any]] = []
        self.progress = 0.0
        self.status = "pending"
        self._reasoning_list: List[str] = []
        self.findings: List[Dict[str, Any]] = []
        self.metrics: Dict[str, Any] = {}

    def log(self, stage_name: str, level: str, message: str, data: Optional[Dict[str, Any]] = None):
        """Add a log entry"""
        self.stage_name = stage_name
        log_entry = {
            "timestamp": datetime.now().isoformat(),
            "level": level,  # info, warning, error, success
            "message": message,
            "data": data or {}
        }
        self.logs.append(log_entry)
        if self.echo:
            print(f"[{stage_name}] {level}: {message}", file=sys.stderr)
        return log_entry

    def reasoning(self, stage_name: str, message: str):
        """Add reasoning for a decision (breakpoint choice, dropped records...)"""
        self.stage_name = stage_name
        self._reasoning_list.append(message)
        self.log(stage_name, "info", f"Reasoning: {message}")

    def update_progress(self, progress: float, message: Optional[str] = None):
        """Update progress (0.0 to 1.0)"""
        self.progress = min(1.0, max(0.0, progress))
        if message:
            self.log(self.stage_name, "info", f"Progress: {int(self.progress * 100)}% - {message}")

    def add_finding(self, finding: Dict[str, Any]):
        """Add a finding; findings carry no timestamp so reports stay reproducible"""
        self.findings.append(finding)
        self.log(self.stage_name, "warning", f"Finding: {finding.get('description', 'Unknown issue')}", data=finding)

    def set_status(self, status: str):
        self.status = status
        self.log(self.stage_name, "success" if status == "completed" else "info", f"Status changed to: {status.upper()}")

    def set_metric(self, key: str, value: Any):
        self.metrics[key] = value

    def to_dict(self, include_logs: bool = True) -> Dict[str, Any]:
        """Convert logger state to dictionary"""
        state = {
            "stage_name": self.stage_name,
            "status": self.status,
            "progress": self.progress,
            "reasoning": list(self._reasoning_list),
            "findings": list(self.findings),
            "metrics": dict(self.metrics),
            "summary": f"{len(self.findings)} findings, {len(self.logs)} log entries"
        }
        if include_logs:
            state["logs"] = list(self.logs)
        return state
