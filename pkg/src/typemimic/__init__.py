"""typemimic: human-like typing performances for chatbot responses."""

from .analysis import RegressionFit, conversation_stats, fit_regression
from .errors import (
    BackendUnavailable,
    ConfigError,
    PlanIntegrityError,
    ReplayError,
    StructureError,
    TypemimicError,
    ValidationError,
)
from .lexicon import Lexicon, load_lexicon
from .pipeline import derive_seed, synthesize_trace
from .planning import (
    ActionKind,
    ActionLevel,
    EditAction,
    EditingParameters,
    EditPlan,
    TriggerMode,
    TriggerPoint,
    assign_trigger,
    generate_typo,
    plan_edits,
    replay_plan,
    validate_params,
)
from .runtime import (
    AgentConfig,
    BackendBinding,
    EchoBackend,
    PromptConstraints,
    RemoteLLMBackend,
    ScriptedBackend,
    Session,
    build_prompt,
    preset,
    preset_names,
)
from .scheduling import (
    EventTrace,
    KeystrokeEvent,
    TemporalParameters,
    apply_trace,
    sample_delay,
    schedule,
    trace_from_jsonl,
    trace_to_jsonl,
    validate_temporal,
)
from .segmenter import DocumentStructure, Span, flatten, segment
from .simulator import TypingSimulator

__version__ = "0.1.0"

__all__ = [
    "ActionKind",
    "ActionLevel",
    "AgentConfig",
    "BackendBinding",
    "BackendUnavailable",
    "ConfigError",
    "DocumentStructure",
    "EchoBackend",
    "EditAction",
    "EditPlan",
    "EditingParameters",
    "EventTrace",
    "KeystrokeEvent",
    "Lexicon",
    "PlanIntegrityError",
    "PromptConstraints",
    "RegressionFit",
    "RemoteLLMBackend",
    "ReplayError",
    "ScriptedBackend",
    "Session",
    "Span",
    "StructureError",
    "TemporalParameters",
    "TriggerMode",
    "TriggerPoint",
    "TypemimicError",
    "TypingSimulator",
    "ValidationError",
    "apply_trace",
    "assign_trigger",
    "build_prompt",
    "conversation_stats",
    "derive_seed",
    "fit_regression",
    "flatten",
    "generate_typo",
    "load_lexicon",
    "plan_edits",
    "preset",
    "preset_names",
    "replay_plan",
    "sample_delay",
    "schedule",
    "segment",
    "synthesize_trace",
    "trace_from_jsonl",
    "trace_to_jsonl",
    "validate_params",
    "validate_temporal",
    "__version__",
]
