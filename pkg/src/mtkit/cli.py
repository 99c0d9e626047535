"""Command-line pipeline: simulate, gen-tasks, score, stats, make-toy-corpus.

Config precedence is flags > config file > defaults; the merged effective
config is written next to the outputs so every run is reproducible from
its artifacts. Metadata files are written atomically (temp file + rename).

Exit codes: 0 success, 1 usage error, 2 data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .audio import write_audio
from .corpus import load_manifest, pool_stats
from .errors import MtkitError
from .metrics import score_corpus
from .mixer import (
    MixConfig,
    SimPlan,
    load_mixtures,
    mixture_stats,
    mixture_to_dict,
    render_mixture,
    simulate_corpus,
)
from .tasks import (
    DEFAULT_TEMPLATES,
    TaskConfig,
    TaskKind,
    gen_taskset,
    load_tasks,
    load_templates,
)
from .textnorm import DEFAULT_NORMALIZATION, NormalizationConfig
from .toy import make_toy_corpus

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_write_jsonl(path: Path, dicts) -> None:
    _atomic_write_text(path, "".join(
        json.dumps(d, ensure_ascii=False) + "\n" for d in dicts))


def _load_config_file(path) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as f:
        cfg = json.load(f)
    if not isinstance(cfg, dict):
        raise MtkitError(f"{path}: config must be a JSON object")
    return cfg


def _effective(args, config: dict, key: str, default):
    """Flag (if given) beats config file beats default."""
    flag = getattr(args, key.replace("-", "_"), None)
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return default


def _norm_config(args, config) -> NormalizationConfig:
    norm_path = _effective(args, config, "norm", None)
    if norm_path is None:
        return DEFAULT_NORMALIZATION
    with open(norm_path, encoding="utf-8") as f:
        fields = json.load(f)
    allowed = {f.name for f in dataclasses.fields(NormalizationConfig)}
    unknown = set(fields) - allowed
    if unknown:
        raise MtkitError(f"unknown normalization fields: {sorted(unknown)}")
    return NormalizationConfig(**fields)


def _parse_int_list(text: str) -> list[int]:
    return [int(x) for x in str(text).split(",") if x != ""]


def _parse_float_list(text: str) -> list[float]:
    return [float(x) for x in str(text).split(",") if x != ""]


def _parse_task_mix(text: str) -> list[tuple[TaskKind, float]]:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            name, w = part.split(":", 1)
            weight = float(w)
        else:
            name, weight = part, 1.0
        name = name.upper()
        if name not in TaskKind.__members__:
            raise MtkitError(f"unknown task kind {name!r}")
        out.append((TaskKind[name], weight))
    if not out:
        raise MtkitError("empty task mix")
    return out


def _write_run_config(out_dir: Path, command: str, effective: dict) -> None:
    payload = {"tool": "mtkit", "version": __version__, "command": command,
               "config": effective}
    _atomic_write_text(out_dir / "run_config.json",
                       json.dumps(payload, indent=2, ensure_ascii=False) + "\n")


# --- subcommands ---

def cmd_simulate(args) -> int:
    config = _load_config_file(args.config)
    manifest = _effective(args, config, "manifest", None)
    out = _effective(args, config, "out", None)
    if manifest is None or out is None:
        print("simulate: --manifest and --out are required", file=sys.stderr)
        return EXIT_USAGE
    seed = int(_effective(args, config, "seed", 0))
    ks = _parse_int_list(_effective(args, config, "k", "2"))
    jobs = int(_effective(args, config, "jobs", 1))
    de_share = float(_effective(args, config, "de_share", 0.0))
    de_tolerance = float(_effective(args, config, "de_tolerance", 0.02))
    delta_min = float(_effective(args, config, "delta_min", 0.5))
    delta_max_raw = _effective(args, config, "delta_max", None)
    delta_max = float(delta_max_raw) if delta_max_raw is not None else math.inf

    counts_raw = _effective(args, config, "count", None)
    hours_raw = _effective(args, config, "hours", None)
    if (counts_raw is None) == (hours_raw is None):
        print("simulate: exactly one of --count / --hours is required", file=sys.stderr)
        return EXIT_USAGE
    mix_cfg = MixConfig(delta_min=delta_min, delta_max=delta_max)
    if counts_raw is not None:
        counts = _parse_int_list(counts_raw)
        if len(counts) != len(ks):
            print("simulate: --count must match --k in length", file=sys.stderr)
            return EXIT_USAGE
        plan = SimPlan(counts=dict(zip(ks, counts)), de_share=de_share,
                       de_tolerance=de_tolerance, mix=mix_cfg)
    else:
        hours = _parse_float_list(hours_raw)
        if len(hours) != len(ks):
            print("simulate: --hours must match --k in length", file=sys.stderr)
            return EXIT_USAGE
        plan = SimPlan(hours=dict(zip(ks, hours)), de_share=de_share,
                       de_tolerance=de_tolerance, mix=mix_cfg)

    pool = load_manifest(manifest)
    records = simulate_corpus(pool, plan, seed)

    out_dir = Path(out)
    audio_dir = out_dir / "audio"
    audio_dir.mkdir(parents=True, exist_ok=True)

    def render_one(rec):
        wave = render_mixture(rec, pool)
        rel = f"audio/{rec.mixture_id}.wav"
        write_audio(wave, out_dir / rel)
        rec.audio_path = rel

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            list(ex.map(render_one, records))
    else:
        for rec in records:
            render_one(rec)

    records.sort(key=lambda r: r.mixture_id)
    _atomic_write_jsonl(out_dir / "mixtures.jsonl",
                        (mixture_to_dict(r) for r in records))
    _write_run_config(out_dir, "simulate", {
        "manifest": str(manifest), "out": str(out), "seed": seed,
        "k": ks, "count": counts_raw, "hours": hours_raw,
        "de_share": de_share, "de_tolerance": de_tolerance, "delta_min": delta_min,
        "delta_max": None if math.isinf(delta_max) else delta_max,
        "jobs": jobs,
    })
    stats = mixture_stats(records)
    print(f"simulate: {len(records)} mixtures, {stats.total_hours:.3f} h, "
          f"de share {stats.de_hours_share:.3f} -> {out_dir / 'mixtures.jsonl'}")
    return EXIT_OK


def cmd_gen_tasks(args) -> int:
    config = _load_config_file(args.config)
    manifest = _effective(args, config, "manifest", None)
    mixtures = _effective(args, config, "mixtures", None)
    out = _effective(args, config, "out", None)
    if manifest is None or mixtures is None or out is None:
        print("gen-tasks: --manifest, --mixtures and --out are required", file=sys.stderr)
        return EXIT_USAGE
    seed = int(_effective(args, config, "seed", 0))
    task_mix = _parse_task_mix(_effective(args, config, "tasks", "mt"))
    templates_path = _effective(args, config, "templates", None)
    templates = load_templates(templates_path) if templates_path else DEFAULT_TEMPLATES
    norm = _norm_config(args, config)

    pool = load_manifest(manifest)
    records = load_mixtures(mixtures, pool)
    out_dir = Path(out)
    tt_dir = out_dir / "tt_audio"
    needs_tt = any(kind == TaskKind.TT and w > 0 for kind, w in task_mix)
    if needs_tt:
        tt_dir.mkdir(parents=True, exist_ok=True)
    samples, skips = gen_taskset(
        records, pool, task_mix, templates, seed,
        cfg=TaskConfig(), norm=norm,
        tt_audio_dir=tt_dir if needs_tt else None,
        mixture_root=Path(mixtures).parent,
    )
    samples.sort(key=lambda s: s.sample_id)
    out_dir.mkdir(parents=True, exist_ok=True)
    _atomic_write_jsonl(out_dir / "tasks.jsonl", (s.to_dict() for s in samples))
    _write_run_config(out_dir, "gen-tasks", {
        "manifest": str(manifest), "mixtures": str(mixtures), "out": str(out),
        "seed": seed, "tasks": [(k.value, w) for k, w in task_mix],
        "templates": templates_path,
    })
    skip_note = ", ".join(f"{k}={v}" for k, v in sorted(skips.items())) or "none"
    print(f"gen-tasks: {len(samples)} samples -> {out_dir / 'tasks.jsonl'} "
          f"(skips: {skip_note})")
    return EXIT_OK


def cmd_score(args) -> int:
    config = _load_config_file(args.config)
    refs_path = _effective(args, config, "refs", None)
    hyps_path = _effective(args, config, "hyps", None)
    if refs_path is None or hyps_path is None:
        print("score: --refs and --hyps are required", file=sys.stderr)
        return EXIT_USAGE
    mode = _effective(args, config, "mode", "sot_permutation")
    norm = _norm_config(args, config)

    refs = [(s.sample_id, s.target) for s in load_tasks(refs_path)]
    hyps = []
    with open(hyps_path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            d = json.loads(line)
            if "id" not in d or "hyp" not in d:
                raise MtkitError(f"{hyps_path}:{line_no}: record needs 'id' and 'hyp'")
            hyps.append((d["id"], d["hyp"]))

    report = score_corpus(refs, hyps, mode=mode, cfg=norm)
    print(f"WER {100.0 * report.micro_wer:.2f}%  "
          f"(S={report.substitutions} D={report.deletions} I={report.insertions} "
          f"ref_words={report.ref_words}, macro {100.0 * report.macro_wer:.2f}%, "
          f"missing hyps {report.missing_hypotheses})")

    out = _effective(args, config, "out", None)
    if out is not None:
        out_dir = Path(out)
        summary = {
            "mode": report.mode,
            "num_samples": report.num_samples,
            "missing_hypotheses": report.missing_hypotheses,
            "substitutions": report.substitutions,
            "deletions": report.deletions,
            "insertions": report.insertions,
            "ref_words": report.ref_words,
            "micro_wer": report.micro_wer,
            "macro_wer": report.macro_wer,
            "segment_count_confusion": {
                f"{r}x{h}": n for (r, h), n in
                sorted(report.segment_count_confusion.items())
            },
        }
        _atomic_write_text(out_dir / "report.json",
                           json.dumps(summary, indent=2) + "\n")
        _atomic_write_jsonl(out_dir / "per_sample.jsonl", (
            {
                "id": s.sample_id,
                "wer": s.report.wer,
                "substitutions": s.report.substitutions,
                "deletions": s.report.deletions,
                "insertions": s.report.insertions,
                "ref_words": s.report.ref_words,
                **({"matched_index": s.matched_index} if s.matched_index is not None else {}),
                **({"ref_segments": s.n_ref_segments, "hyp_segments": s.n_hyp_segments}
                   if s.n_ref_segments is not None else {}),
            }
            for s in report.per_sample
        ))
    return EXIT_OK


def cmd_stats(args) -> int:
    path = args.input
    with open(path, encoding="utf-8") as f:
        first = ""
        for line in f:
            if line.strip():
                first = line
                break
    if not first:
        raise MtkitError(f"{path}: empty file")
    probe = json.loads(first)

    if "components" in probe and "mixture_id" in probe:
        records = load_mixtures(path)
        st = mixture_stats(records)
        k_hist = {k: sum(1 for r in records if len(r.components) == k)
                  for k in sorted({len(r.components) for r in records})}
        summary = {
            "kind": "mixtures",
            "count": len(records),
            "total_hours": st.total_hours,
            "hours_by_k": {str(k): h for k, h in sorted(st.hours_by_k.items())},
            "k_histogram": {str(k): n for k, n in k_hist.items()},
            "de_hours_share": st.de_hours_share,
            "overlap_histogram": st.overlap_histogram,
        }
    elif "task" in probe and "sample_id" in probe:
        samples = load_tasks(path)
        mix = {}
        for s in samples:
            mix[s.task.value] = mix.get(s.task.value, 0) + 1
        summary = {"kind": "tasks", "count": len(samples),
                   "task_mix": dict(sorted(mix.items()))}
    else:
        stats = pool_stats(load_manifest(path))
        summary = {
            "kind": "manifest",
            "total_hours": stats.total_hours,
            "hours_by_language": stats.hours_by_language,
            "language_share": stats.language_share,
            "speaker_count": stats.speaker_count,
            "utterance_count": stats.utterance_count,
        }
    print(json.dumps(summary, indent=2))
    if args.out:
        _atomic_write_text(Path(args.out), json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def cmd_make_toy_corpus(args) -> int:
    manifest = make_toy_corpus(
        args.out, n_speakers=args.speakers, utts_per_speaker=args.utts_per_speaker,
        de_speakers=args.de_speakers, seed=args.seed,
    )
    print(f"make-toy-corpus: wrote {manifest}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mtkit",
        description="Multi-talker mixture simulation, task generation, and WER scoring.",
    )
    p.add_argument("--version", action="version", version=f"mtkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="sample and render multi-talker mixtures")
    sim.add_argument("--manifest")
    sim.add_argument("--out")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--k", help="comma list of talker counts, e.g. 1,2,3")
    sim.add_argument("--count", help="mixture counts per k, e.g. 100,400,100")
    sim.add_argument("--hours", help="target hours per k (alternative to --count)")
    sim.add_argument("--de-share", dest="de_share", type=float)
    sim.add_argument("--de-tolerance", dest="de_tolerance", type=float)
    sim.add_argument("--delta-min", dest="delta_min", type=float)
    sim.add_argument("--delta-max", dest="delta_max", type=float)
    sim.add_argument("--jobs", type=int)
    sim.add_argument("--config")
    sim.set_defaults(func=cmd_simulate)

    gen = sub.add_parser("gen-tasks", help="generate instruction/target samples")
    gen.add_argument("--manifest")
    gen.add_argument("--mixtures")
    gen.add_argument("--out")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--tasks", help="weighted mix, e.g. mt:1,kt:1,os:2")
    gen.add_argument("--templates")
    gen.add_argument("--norm")
    gen.add_argument("--jobs", type=int)
    gen.add_argument("--config")
    gen.set_defaults(func=cmd_gen_tasks)

    sc = sub.add_parser("score", help="score hypotheses against task targets")
    sc.add_argument("--refs")
    sc.add_argument("--hyps")
    sc.add_argument("--mode", choices=["single", "sot_permutation", "best_match"])
    sc.add_argument("--norm")
    sc.add_argument("--out")
    sc.add_argument("--config")
    sc.set_defaults(func=cmd_score)

    st = sub.add_parser("stats", help="summarize a manifest, mixtures, or tasks file")
    st.add_argument("--input", required=True)
    st.add_argument("--out")
    st.set_defaults(func=cmd_stats)

    toy = sub.add_parser("make-toy-corpus", help="synthesize a tiny self-contained corpus")
    toy.add_argument("--out", required=True)
    toy.add_argument("--speakers", type=int, default=8)
    toy.add_argument("--utts-per-speaker", dest="utts_per_speaker", type=int, default=4)
    toy.add_argument("--de-speakers", dest="de_speakers", type=int, default=2)
    toy.add_argument("--seed", type=int, default=0)
    toy.set_defaults(func=cmd_make_toy_corpus)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; --version/--help exit 0
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except MtkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
