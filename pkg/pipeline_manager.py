"""
Pipeline Manager for the identity verification suites
Runs the suites in order with monitoring, logging and a summary of the run
"""

import json
import time
import traceback
from dataclasses import asdict, dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from loguru import logger

from config_manager import ApplicationConfig, get_config
from src.errors import ParseError
from src.identity_verifier import IdentityVerifier


class VerificationSuite(Enum):
    """Verification stages"""
    THM22 = "thm22"
    CW = "cw"
    LENGTH = "length"
    HECKE = "hecke"
    EULER = "euler"
    UNIPOTENT = "unipotent"
    COR34 = "cor34"
    THM43 = "thm43"


@dataclass
class PipelineOptions:
    """Overrides for a single verification run; None keeps the configured value"""
    types: Optional[List[str]] = None
    lattices: Optional[List[str]] = None
    ymax: Optional[int] = None
    radius: Optional[int] = None
    max_rank: Optional[int] = None
    stop_on_failure: bool = False


@dataclass
class StageResult:
    """Result of a verification stage"""
    stage: VerificationSuite
    status: str  # 'success', 'failed', 'error'
    start_time: datetime
    end_time: Optional[datetime] = None
    duration: Optional[float] = None
    data: Any = None
    metadata: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None

    def __post_init__(self):
        if self.end_time and self.start_time:
            self.duration = (self.end_time - self.start_time).total_seconds()

    def to_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result['stage'] = self.stage.value
        result['data'] = None
        return result


class PipelineMonitor:
    """Track stage progress and notify callbacks"""

    def __init__(self):
        self.stage_results: List[StageResult] = []
        self.current_stage: Optional[VerificationSuite] = None
        self.start_time: Optional[datetime] = None
        self.callbacks: List[Callable] = []
        self.planned_stages = 0

    def add_callback(self, callback: Callable):
        self.callbacks.append(callback)

    def _notify(self, *event):
        for callback in self.callbacks:
            try:
                callback(*event)
            except Exception as e:
                logger.warning(f"Callback error: {e}")

    def start_pipeline(self, planned_stages: int):
        self.start_time = datetime.now()
        self.stage_results = []
        self.planned_stages = planned_stages
        logger.info(f"Verification run started with {planned_stages} suites")

    def start_stage(self, stage: VerificationSuite):
        self.current_stage = stage
        self.stage_results.append(StageResult(stage=stage, status='running', start_time=datetime.now()))
        logger.info(f"Starting suite: {stage.value}")
        self._notify('stage_start', stage)

    def complete_stage(self, stage: VerificationSuite, status: str, data: Any = None,
                       metadata: Optional[Dict[str, Any]] = None, error: Optional[str] = None):
        result = next((r for r in reversed(self.stage_results) if r.stage == stage and r.end_time is None), None)
        if result is None:
            result = StageResult(stage=stage, status=status, start_time=datetime.now())
            self.stage_results.append(result)

        result.end_time = datetime.now()
        result.status = status
        result.data = data
        result.metadata = metadata or {}
        result.error = error
        result.duration = (result.end_time - result.start_time).total_seconds()

        logger.info(f"Completed suite: {stage.value} ({status})")
        self._notify('stage_complete', stage, status)

    def get_progress_summary(self) -> Dict[str, Any]:
        completed = len([r for r in self.stage_results if r.status != 'running'])
        total = self.planned_stages or len(VerificationSuite)
        return {
            'total_stages': total,
            'completed_stages': completed,
            'current_stage': self.current_stage.value if self.current_stage else None,
            'progress_percentage': completed / total * 100 if total else 100.0,
            'elapsed_time': (datetime.now() - self.start_time).total_seconds() if self.start_time else 0,
            'stage_results': [r.to_dict() for r in self.stage_results],
        }


class VerificationPipeline:
    """Run a selection of verification suites and summarize them"""

    def __init__(self, config: Optional[ApplicationConfig] = None, options: Optional[PipelineOptions] = None):
        self.config = config or get_config()
        self.options = options or PipelineOptions()
        self.monitor = PipelineMonitor()
        self.verifier = IdentityVerifier(self.config)
        self.results: Dict[str, Dict[str, Any]] = {}

    def add_progress_callback(self, callback: Callable):
        self.monitor.add_callback(callback)

    def _stage_function(self, suite: VerificationSuite) -> Callable[[], Dict[str, Any]]:
        o = self.options
        verifier = self.verifier
        return {
            VerificationSuite.THM22: lambda: verifier.validate_thm22(o.types, o.lattices, o.ymax),
            VerificationSuite.CW: lambda: verifier.validate_cw(o.types),
            VerificationSuite.LENGTH: lambda: verifier.validate_length(o.types, o.radius, o.lattices),
            VerificationSuite.HECKE: lambda: verifier.validate_hecke(o.types),
            VerificationSuite.EULER: lambda: verifier.validate_euler(o.max_rank),
            VerificationSuite.UNIPOTENT: lambda: verifier.validate_unipotent(o.types),
            VerificationSuite.COR34: lambda: verifier.validate_cor34(o.types, o.lattices, o.ymax),
            VerificationSuite.THM43: lambda: verifier.validate_thm43(o.types, o.lattices, o.ymax),
        }[suite]

    def run_all(self) -> Dict[str, Any]:
        return self.run_suites(list(VerificationSuite))

    def run_suite(self, suite: VerificationSuite) -> Dict[str, Any]:
        return self.run_suites([suite])

    def run_suites(self, suites: Sequence[VerificationSuite]) -> Dict[str, Any]:
        """Execute suites in order; exceptions inside a suite mark it as an error and the run continues"""
        self.monitor.start_pipeline(len(suites))
        for suite in suites:
            result = self._execute_stage(suite)
            if self.options.stop_on_failure and (result is None or not result['passed']):
                logger.warning(f"Stopping after failed suite {suite.value}")
                break
        summary = self._generate_pipeline_summary()
        logger.info(f"Verification run finished: {'PASSED' if summary['passed'] else 'FAILED'}")
        return summary

    def _execute_stage(self, suite: VerificationSuite) -> Optional[Dict[str, Any]]:
        self.monitor.start_stage(suite)
        try:
            start_time = time.time()
            result = self._stage_function(suite)()
            execution_time = time.time() - start_time

            self.results[suite.value] = result
            metadata = {
                'execution_time': execution_time,
                'checked': result['checked'],
                'issues': len(result['issues']),
                'warnings': len(result['warnings']),
            }
            self.monitor.complete_stage(suite, 'success' if result['passed'] else 'failed', result, metadata)
            return result

        except Exception as e:
            error_msg = f"Suite {suite.value} raised: {e}"
            logger.error(error_msg)
            logger.debug(traceback.format_exc())
            self.monitor.complete_stage(suite, 'error', error=error_msg)
            return None

    def _generate_pipeline_summary(self) -> Dict[str, Any]:
        progress = self.monitor.get_progress_summary()
        stage_results = self.monitor.stage_results
        durations = [r.duration for r in stage_results if r.duration is not None]

        summary = {
            'pipeline_execution': {
                'start_time': self.monitor.start_time.isoformat() if self.monitor.start_time else None,
                'end_time': datetime.now().isoformat(),
                'total_duration': progress['elapsed_time'],
                'stages_completed': progress['completed_stages'],
                'total_stages': progress['total_stages'],
            },
            'suites': {
                r.stage.value: {
                    'status': r.status,
                    'checked': r.metadata.get('checked', 0),
                    'issues': r.metadata.get('issues', 0),
                    'warnings': r.metadata.get('warnings', 0),
                    'error': r.error,
                }
                for r in stage_results
            },
            'counterexamples': {
                name: result['counterexamples'] for name, result in self.results.items() if result['counterexamples']
            },
            'performance_metrics': {
                'average_stage_duration': sum(durations) / len(durations) if durations else 0,
                'longest_stage': max(stage_results, key=lambda r: r.duration or 0).stage.value if stage_results else None,
                'total_checks': sum(r.metadata.get('checked', 0) for r in stage_results),
            },
            'passed': bool(stage_results) and all(r.status == 'success' for r in stage_results),
        }
        return summary

    def report(self) -> str:
        return self.verifier.generate_verification_report(list(self.results.values()))

    def export_summary(self, summary: Dict[str, Any], output_dir: Optional[Path] = None) -> Path:
        """Write the run summary as JSON"""
        output_dir = Path(output_dir or self.config.output.output_directory)
        output_dir.mkdir(parents=True, exist_ok=True)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        summary_file = output_dir / f"verification_summary_{timestamp}.json"
        with open(summary_file, 'w') as f:
            json.dump(summary, f, indent=self.config.output.json_indent, default=str)
        logger.info(f"Verification summary exported to {summary_file}")
        return summary_file


def parse_suites(names: Sequence[str]) -> List[VerificationSuite]:
    """Suite names to enum members; 'all' selects every suite"""
    if not names or "all" in names:
        return list(VerificationSuite)
    suites = []
    for name in names:
        try:
            suites.append(VerificationSuite(name))
        except ValueError:
            valid = ", ".join(s.value for s in VerificationSuite)
            raise ParseError("suite", f"unknown suite {name!r}; choose from {valid}, all")
    return suites


def run_verification(suites: Sequence[str] = ("all",), config: Optional[ApplicationConfig] = None,
                     options: Optional[PipelineOptions] = None) -> Dict[str, Any]:
    """Run verification with progress logging"""

    def progress_callback(event_type, stage, status=None):
        if event_type == 'stage_complete':
            logger.info(f"[{stage.value}] {status}")

    pipeline = VerificationPipeline(config, options)
    pipeline.add_progress_callback(progress_callback)
    return pipeline.run_suites(parse_suites(suites))
