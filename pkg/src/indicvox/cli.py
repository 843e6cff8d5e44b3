"""Command-line entry point exposing the pipeline as subcommands.

Each module's errors map to a distinct exit code so scripts can branch on
failures; 1 is reserved for unexpected errors and 2 for usage errors.
Defaults for every flag live in the packaged defaults.cfg and can be
overridden with --config; fixed seeds make runs byte-reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from indicvox import attention, corpus, speaker
from indicvox.config import ConfigError, load_config
from indicvox.dsp import align, filters, matrixio, mel, wavio
from indicvox.service import batch, scenarios
from indicvox.text import parse_to_cls, render_from_mlcm, scripts, to_mlcm

DEFAULT_SEED = 0

# Most specific class wins: codes are resolved by MRO walk.
EXIT_CODES: dict[type, int] = {
    scripts.MixedScriptError: 10,
    scripts.NoIndicContentError: 11,
    scripts.ScriptMismatchError: 12,
    scripts.UnmappableCodepointError: 13,
    scripts.UnrenderableTokenError: 14,
    scripts.ScriptError: 16,
    corpus.MissingAudioError: 20,
    corpus.UnreadableHeaderError: 21,
    corpus.TranscriptMismatchError: 22,
    corpus.EmptyAfterCleaningError: 23,
    corpus.CrossFamilyPoolingError: 24,
    corpus.DuplicateIdError: 25,
    corpus.InsufficientDataError: 26,
    corpus.CorpusError: 27,
    wavio.WavFormatError: 30,
    mel.TooShortError: 31,
    mel.RateMismatchError: 32,
    mel.OrderTooHighError: 33,
    mel.FeatureError: 34,
    align.EmptyTrackError: 35,
    align.OrderMismatchError: 36,
    align.AlignError: 37,
    filters.InvalidFrequencyError: 38,
    filters.TooShortError: 39,
    filters.FilterError: 40,
    matrixio.MatrixFormatError: 41,
    speaker.BadDimensionError: 45,
    speaker.DuplicateUtteranceError: 46,
    speaker.CorruptArchiveError: 47,
    speaker.UnknownSpeakerError: 48,
    speaker.ZeroVectorError: 49,
    speaker.TooShortError: 50,
    speaker.SpeakerError: 51,
    attention.IndexOutOfRangeError: 55,
    attention.DimensionMismatchError: 56,
    attention.AttentionError: 57,
    batch.NoPairsError: 60,
    ConfigError: 65,
    OSError: 66,
}


def exit_code_for(exc: BaseException) -> int | None:
    for klass in type(exc).__mro__:
        if klass in EXIT_CODES:
            return EXIT_CODES[klass]
    return None


def _mel_params(config: dict[str, str], sample_rate: int | None = None) -> mel.MelParams:
    rate = sample_rate or int(config["sample_rate"])
    return mel.MelParams(
        sample_rate=rate,
        fft_size=int(config["fft_size"]),
        win_size=int(config["win_size"]),
        hop_size=int(config["hop_size"]),
        n_mels=int(config["n_mels"]),
        f_min=float(config["f_min"]),
        f_max=min(float(config["f_max"]), rate / 2),
        log_floor=float(config["log_floor"]),
    )


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# handlers

def cmd_normalize(args, config) -> int:
    sequence = to_mlcm(args.text, args.lang)
    labels = [
        f"0x{t.label_id:02X}" if isinstance(t.label_id, int) else t.label_id
        for t in sequence.tokens
    ]
    lines = [" ".join(labels)]
    payload = {
        "language": args.lang,
        "sourceScript": sequence.source_script.name,
        "labels": labels,
    }
    if args.to:
        rendered = render_from_mlcm(sequence, args.to)
        lines.append(rendered)
        payload["rendered"] = rendered
    _emit(args, payload, lines)
    return 0


def cmd_parse(args, config) -> int:
    sequence = parse_to_cls(args.text, args.lang)
    words = list(sequence.words())
    lines = [" | ".join(" ".join(word) for word in words)]
    payload = {
        "language": args.lang,
        "phones": list(sequence.phones),
        "words": [list(word) for word in words],
    }
    _emit(args, payload, lines)
    return 0


def _scan_spec(spec: str):
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--scan expects DIR:LANGUAGE:SPEAKER, got {spec!r}")
    return parts


def cmd_pool(args, config) -> int:
    manifests = [corpus.load_manifest(path) for path in args.manifests]
    for spec in args.scan or []:
        directory, language, speaker_id = _scan_spec(spec)
        manifests.append(corpus.build_manifest(directory, language, speaker_id))
    max_duration = float(args.max_duration or config["max_duration_sec"])
    manifests = [corpus.filter_manifest(m, max_duration) for m in manifests]
    pooled = corpus.pool(manifests, args.family)
    ordered = corpus.Manifest.of(
        sorted(pooled.records, key=lambda r: r.id), provenance=list(pooled.provenance)
    )
    corpus.save_manifest(ordered, args.out)
    hours = ordered.total_duration_sec / 3600.0
    _emit(
        args,
        {
            "records": len(ordered.records),
            "hours": hours,
            "family": args.family,
            "out": str(args.out),
        },
        [f"{len(ordered.records)} records, {hours:.2f} h -> {args.out}"],
    )
    return 0


def cmd_subset(args, config) -> int:
    manifest = corpus.load_manifest(args.manifest)
    seed = int(args.seed if args.seed is not None else config["seed"])
    subset = corpus.select_adaptation_subset(manifest, args.target_min, seed=seed)
    corpus.save_manifest(subset, args.out)
    minutes = subset.total_duration_sec / 60.0
    _emit(
        args,
        {
            "records": len(subset.records),
            "minutes": minutes,
            "seed": seed,
            "out": str(args.out),
        },
        [f"{len(subset.records)} records, {minutes:.2f} min -> {args.out}"],
    )
    return 0


def cmd_features(args, config) -> int:
    audio, sample_rate = wavio.read_wav(args.wav)
    params = _mel_params(config, sample_rate)
    spectrogram = mel.mel_spectrogram(audio, sample_rate, params)
    matrixio.dump_matrix(args.out, spectrogram.frames, params.to_dict())
    lines = [f"mel {spectrogram.frames.shape[0]} x {spectrogram.frames.shape[1]} -> {args.out}"]
    payload = {
        "melFrames": spectrogram.frames.shape[0],
        "melBands": spectrogram.frames.shape[1],
        "out": str(args.out),
    }
    if args.mcep:
        order = int(args.order or config["mcep_order"])
        track = mel.mcep(spectrogram, order=order)
        matrixio.dump_matrix(args.mcep, track.frames, {"order": order})
        lines.append(f"mcep {track.frames.shape[0]} x {track.frames.shape[1]} -> {args.mcep}")
        payload["mcepOut"] = str(args.mcep)
        payload["mcepOrder"] = order
    _emit(args, payload, lines)
    return 0


def cmd_mcd(args, config) -> int:
    order = int(args.order or config["mcep_order"])
    result = batch.batch_mcd(
        args.ref, args.syn, order=order, report_path=args.report
    )
    lines = []
    for row in result.rows:
        if "mcd" in row:
            lines.append(f"{row['utteranceId']}: {row['mcd']:.4f}")
        else:
            lines.append(f"{row['utteranceId']}: error: {row['error']}")
    mean_text = "n/a" if result.mean is None else f"{result.mean:.4f}"
    lines.append(
        f"mean: {mean_text} ({result.pair_count} pairs, {result.error_count} errors)"
    )
    _emit(args, result.to_json(), lines)
    return 0


def cmd_notch(args, config) -> int:
    audio, sample_rate = wavio.read_wav(args.infile)
    q = float(args.q or config["notch_q"])
    if args.freq:
        filtered = audio
        frequencies = [float(f) for f in args.freq]
        for f0 in frequencies:
            filtered = filters.notch_filter(filtered, f0, sample_rate, q)
    else:
        filtered, frequencies = filters.remove_line_noise(audio, sample_rate, q)
    wavio.write_wav(args.out, filtered, sample_rate)
    shown = ", ".join(f"{f:.1f} Hz" for f in frequencies) or "none"
    _emit(
        args,
        {"frequencies": frequencies, "q": q, "out": str(args.out)},
        [f"notched: {shown} -> {args.out}"],
    )
    return 0


def cmd_embed(args, config) -> int:
    if args.wav:
        audio, sample_rate = wavio.read_wav(args.wav)
        embedding = speaker.toy_embedding(audio, sample_rate, _mel_params(config, sample_rate))
        vector = [float(v) for v in embedding.vector]
        _emit(
            args,
            {"dim": speaker.EMBEDDING_DIM, "vector": vector},
            [" ".join(repr(v) for v in vector)],
        )
        return 0
    if not args.out:
        raise ConfigError("embed --manifest requires --out")
    manifest = corpus.load_manifest(args.manifest)
    base = Path(args.manifest).parent
    embeddings = {}
    membership = {}
    for record in sorted(manifest.records, key=lambda r: r.id):
        path = Path(record.audio_path)
        if not path.is_absolute():
            path = base / path
        audio, sample_rate = wavio.read_wav(path)
        embeddings[record.id] = speaker.toy_embedding(
            audio, sample_rate, _mel_params(config, sample_rate)
        )
        membership[record.id] = record.speaker
    speaker.save_embeddings(args.out, embeddings)
    if args.membership:
        lines = [f"{utt}\t{spk}" for utt, spk in sorted(membership.items())]
        Path(args.membership).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _emit(
        args,
        {"utterances": len(embeddings), "out": str(args.out)},
        [f"{len(embeddings)} embeddings -> {args.out}"],
    )
    return 0


def cmd_gradcheck(args, config) -> int:
    seeds = int(args.seeds or config["grad_seeds"])
    eps = float(args.eps or config["grad_eps"])
    tolerance = float(config["grad_tolerance"])
    errors = [attention.attention_grad_check(seed, eps) for seed in range(seeds)]
    worst = max(errors)
    ok = worst < tolerance
    lines = [
        f"seed {seed}: {error:.3e} {'ok' if error < tolerance else 'FAIL'}"
        for seed, error in enumerate(errors)
    ]
    lines.append(f"max: {worst:.3e} (tolerance {tolerance:.0e})")
    _emit(
        args,
        {"seeds": seeds, "errors": errors, "max": worst, "tolerance": tolerance, "ok": ok},
        lines,
    )
    return 0 if ok else 1


def cmd_serve(args, config) -> int:
    import uvicorn

    from indicvox.service.app import create_app
    from indicvox.service.store import EvalStore

    host = args.host or config["host"]
    port = int(args.port or config["port"])
    uvicorn.run(create_app(EvalStore(args.root)), host=host, port=port)
    return 0


def cmd_scenarios(args, config) -> int:
    speaker_languages = {}
    for item in args.speaker_language or []:
        name, _, language = item.partition("=")
        if not language:
            raise ConfigError(f"--speaker-language expects NAME=LANGUAGE, got {item!r}")
        speaker_languages[name] = language
    plan = scenarios.plan_scenarios(
        args.seen_languages.split(","),
        args.seen_speakers.split(","),
        args.target_languages.split(","),
        args.target_speakers.split(","),
        speaker_languages or None,
    )
    lines = [
        f"({entry.label}) text={entry.text_language} speaker={entry.speaker} "
        f"languageSeen={entry.language_seen} speakerSeen={entry.speaker_seen}"
        for entry in plan.entries
    ]
    _emit(args, plan.to_json(), lines)
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    common.add_argument("--config", help="key-value file overriding packaged defaults")

    parser = argparse.ArgumentParser(prog="indicvox", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("normalize", parents=[common], help="text to common label space")
    p.add_argument("--lang", required=True, help="language (fixes the expected script)")
    p.add_argument("--to", help="render back into this script")
    p.add_argument("text")
    p.set_defaults(handler=cmd_normalize)

    p = sub.add_parser("parse", parents=[common], help="text to phone sequence")
    p.add_argument("--lang", required=True)
    p.add_argument("text")
    p.set_defaults(handler=cmd_parse)

    p = sub.add_parser("pool", parents=[common], help="pool manifests within a family")
    p.add_argument("manifests", nargs="*", help="manifest files to pool")
    p.add_argument("--scan", action="append", metavar="DIR:LANGUAGE:SPEAKER",
                   help="build a manifest from a corpus directory")
    p.add_argument("--family", required=True, choices=["IndoAryan", "Dravidian"])
    p.add_argument("--max-duration", type=float,
                   help="drop utterances longer than this many seconds (default 15)")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_pool)

    p = sub.add_parser("subset", parents=[common], help="pick an adaptation subset")
    p.add_argument("--manifest", required=True)
    p.add_argument("--target-min", type=float, required=True, help="target minutes")
    p.add_argument("--seed", type=int, help="shuffle seed (default 0)")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_subset)

    p = sub.add_parser("features", parents=[common], help="mel and cepstra from a WAV")
    p.add_argument("--wav", required=True)
    p.add_argument("--out", required=True, help="mel matrix output")
    p.add_argument("--mcep", help="also write cepstra here")
    p.add_argument("--order", type=int, help="cepstral order (default 24)")
    p.set_defaults(handler=cmd_features)

    p = sub.add_parser("mcd", parents=[common], help="batch MCD over paired dirs")
    p.add_argument("--ref", required=True)
    p.add_argument("--syn", required=True)
    p.add_argument("--order", type=int)
    p.add_argument("--report", help="write a JSON report here")
    p.set_defaults(handler=cmd_mcd)

    p = sub.add_parser("notch", parents=[common], help="remove tonal line noise")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--freq", action="append", help="notch here instead of detecting")
    p.add_argument("--q", type=float, help="notch quality factor (default 30)")
    p.set_defaults(handler=cmd_notch)

    p = sub.add_parser("embed", parents=[common], help="speaker embeddings")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--wav", help="print the embedding of one file")
    group.add_argument("--manifest", help="embed every utterance in a manifest")
    p.add_argument("--out", help="archive output (manifest mode)")
    p.add_argument("--membership", help="also write utterance-speaker pairs here")
    p.set_defaults(handler=cmd_embed)

    p = sub.add_parser("gradcheck", parents=[common],
                       help="verify attention gradients against finite differences")
    p.add_argument("--seeds", type=int, help="number of random instances (default 20)")
    p.add_argument("--eps", type=float, help="finite-difference step (default 1e-5)")
    p.set_defaults(handler=cmd_gradcheck)

    p = sub.add_parser("serve", parents=[common], help="run the listening-test service")
    p.add_argument("--root", required=True, help="store directory for the logs")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.set_defaults(handler=cmd_serve)

    p = sub.add_parser("scenarios", parents=[common], help="label synthesis scenarios")
    p.add_argument("--seen-languages", required=True, help="comma-separated")
    p.add_argument("--seen-speakers", required=True, help="comma-separated")
    p.add_argument("--target-languages", required=True, help="comma-separated")
    p.add_argument("--target-speakers", required=True, help="comma-separated")
    p.add_argument("--speaker-language", action="append", metavar="NAME=LANGUAGE",
                   help="native language of a speaker id")
    p.set_defaults(handler=cmd_scenarios)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        return args.handler(args, config)
    except Exception as exc:
        code = exit_code_for(exc)
        if code is None:
            raise
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
