from .run_config import (ConfigError, RunConfig, MediumConfig, McConfig, DiffusionConfig, SweepConfig, OutputConfig,
                         parse_config, resolve_config, BUNDLED_CONFIGS, ENGINE_KINDS)
from .pipeline import RunReport, run, COMMANDS, write_agreement
