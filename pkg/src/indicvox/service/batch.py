"""Batch MCD over paired reference and synthesis directories.

Pairs are matched by filename.  Each pair is scored independently; a
failure on one pair becomes an error row and the mean is taken over the
remaining scores.  Results are written to a JSON report file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from indicvox.dsp.align import dtw_align, mcd_frame_distance
from indicvox.dsp.mel import MelParams, mcep, mel_spectrogram
from indicvox.dsp.wavio import read_wav
from indicvox.service.store import ServiceError


class NoPairsError(ServiceError):
    """The two directories share no WAV filenames."""


@dataclass(frozen=True)
class BatchMcdResult:
    rows: tuple[dict, ...]
    mean: float | None
    pair_count: int
    error_count: int

    def to_json(self) -> dict:
        return {
            "rows": list(self.rows),
            "mean": self.mean,
            "pairCount": self.pair_count,
            "errorCount": self.error_count,
        }


def _mcep_track(path: Path, params: MelParams, order: int):
    audio, sample_rate = read_wav(path)
    if sample_rate != params.sample_rate:
        params = MelParams(
            sample_rate=sample_rate,
            fft_size=params.fft_size,
            win_size=params.win_size,
            hop_size=params.hop_size,
            n_mels=params.n_mels,
            f_min=params.f_min,
            f_max=min(params.f_max, sample_rate / 2),
            log_floor=params.log_floor,
        )
    return mcep(mel_spectrogram(audio, sample_rate, params), order=order)


def batch_mcd(
    ref_dir: str | Path,
    syn_dir: str | Path,
    *,
    params: MelParams | None = None,
    order: int = 24,
    report_path: str | Path | None = None,
) -> BatchMcdResult:
    """Per-utterance MCD for paired filenames; unpaired names become error rows."""
    ref_dir, syn_dir = Path(ref_dir), Path(syn_dir)
    params = params or MelParams()
    ref_names = {p.name for p in ref_dir.glob("*.wav")}
    syn_names = {p.name for p in syn_dir.glob("*.wav")}
    if not ref_names & syn_names:
        raise NoPairsError(f"no shared WAV filenames in {ref_dir} and {syn_dir}")

    rows = []
    scores = []
    for name in sorted(ref_names | syn_names):
        utterance_id = Path(name).stem
        if name not in ref_names or name not in syn_names:
            missing_in = "refDir" if name not in ref_names else "synDir"
            rows.append(
                {"utteranceId": utterance_id, "error": f"no counterpart in {missing_in}"}
            )
            continue
        try:
            ref = _mcep_track(ref_dir / name, params, order)
            syn = _mcep_track(syn_dir / name, params, order)
            path, cost = dtw_align(ref.frames, syn.frames, distance=mcd_frame_distance)
            score = cost / len(path.steps)
            scores.append(score)
            rows.append({"utteranceId": utterance_id, "mcd": score})
        except Exception as exc:
            rows.append({"utteranceId": utterance_id, "error": str(exc)})

    result = BatchMcdResult(
        rows=tuple(rows),
        mean=sum(scores) / len(scores) if scores else None,
        pair_count=len(rows),
        error_count=len(rows) - len(scores),
    )
    if report_path is not None:
        report = {"refDir": str(ref_dir), "synDir": str(syn_dir), "order": order}
        report.update(result.to_json())
        Path(report_path).write_text(
            json.dumps(report, indent=2) + "\n", encoding="utf-8"
        )
    return result
