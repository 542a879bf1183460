"""Turn-based human-robot interaction with permissive strategy templates."""

from .domain import (
    LassoRun,
    Owner,
    PlanningDomain,
    StateInfo,
    parse_domain,
    serialize_domain,
    successors,
    validate_domain,
)
from .errors import CapacityError, ConfigError, SynthesisError, TandemError
from .game import (
    AttractorMode,
    ParityGame,
    Region,
    attractor,
    cooperative_buchi,
    export_game,
    make_game,
    product,
    robot_win_under_template,
)
from .gridworld import build_gridworld
from .kitchen import KitchenConfig, build_kitchen
from .tasklogic import (
    ParityMonitor,
    TaskFormula,
    compile_monitor,
    eval_prop,
    export_monitor,
    import_monitor,
    monitor_accepts,
    parse_task,
    task_accepts,
)
from .templates import (
    StrategyTemplate,
    TemplatePair,
    check_run_compliance,
    enabled_robot_actions,
    synthesize,
    synthesize_templates,
    verify_template_pair,
)
from .runtime import (
    FeedbackMessage,
    ProbabilisticHuman,
    RunRecord,
    ScriptedHuman,
    Session,
    feedback_state,
    handle_unsafe_transition,
    observe_human,
    robot_step,
    simulate,
)

__version__ = "0.1.0"
