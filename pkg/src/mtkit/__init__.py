"""mtkit: multi-talker speech mixture simulation, instruction-task
generation, and permutation-minimum WER scoring."""

__version__ = "0.1.0"

from .audio import (  # noqa: F401
    DEFAULT_SAMPLE_RATE,
    Waveform,
    concat,
    extract_clip,
    overlay,
    read_audio,
    silence,
    write_audio,
)
from .corpus import (  # noqa: F401
    SpeakerPool,
    Utterance,
    load_manifest,
    pool_stats,
    write_manifest,
)
from .metrics import (  # noqa: F401
    AssignmentResult,
    WerReport,
    best_match_wer,
    permutation_wer,
    score_corpus,
    single_wer,
    word_edit_distance,
)
from .mixer import (  # noqa: F401
    MixConfig,
    MixtureComponent,
    MixtureRecord,
    SimPlan,
    mixture_stats,
    overlap_ratio,
    render_mixture,
    sample_mixture,
    simulate_corpus,
)
from .sot import SC_TOKEN, order_segments, parse_sot, serialize_sot  # noqa: F401
from .tasks import (  # noqa: F401
    TaskConfig,
    TaskKind,
    TaskSample,
    candidate_keywords,
    gen_kt,
    gen_mt,
    gen_os,
    gen_ss,
    gen_taskset,
    gen_tl,
    gen_tt,
)
from .textnorm import NormalizationConfig, normalize_text, tokenize  # noqa: F401
from .toy import make_toy_corpus, make_toy_pool  # noqa: F401
