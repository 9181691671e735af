"""
Monitoring Configuration

Loads monitoring settings from environment variables.
"""

import os
from dataclasses import dataclass, field
from typing import Optional


@dataclass
class MonitoringConfig:
    """Configuration for error tracking and run timing."""

    # Sentry settings
    sentry_dsn: Optional[str] = field(default=None)
    sentry_environment: str = "development"
    sentry_traces_sample_rate: float = 0.0

    # Alert thresholds
    slow_run_warning_seconds: float = 600.0

    # Run metadata
    job_name: str = "hcsvd"

    @classmethod
    def from_env(cls) -> "MonitoringConfig":
        """Create config from environment variables."""
        return cls(
            sentry_dsn=os.getenv("SENTRY_DSN") or None,
            sentry_environment=os.getenv("SENTRY_ENVIRONMENT", "development"),
            sentry_traces_sample_rate=float(os.getenv("SENTRY_TRACES_SAMPLE_RATE", "0.0")),
            slow_run_warning_seconds=float(os.getenv("HCSVD_SLOW_RUN_SECONDS", "600")),
            job_name=os.getenv("HCSVD_JOB_NAME", "hcsvd"),
        )

    @property
    def sentry_enabled(self) -> bool:
        """Check if Sentry tracking is configured."""
        return bool(self.sentry_dsn)
