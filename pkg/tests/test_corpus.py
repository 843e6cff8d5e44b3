"""Tests for manifest building, cleaning, filtering, pooling, subsetting."""

import random

import pytest

from indicvox import corpus
from indicvox.corpus import (
    CrossFamilyPoolingError,
    DuplicateIdError,
    EmptyAfterCleaningError,
    InsufficientDataError,
    Manifest,
    MissingAudioError,
    TranscriptMismatchError,
    UnreadableHeaderError,
    UtteranceRecord,
    build_manifest,
    clean_text,
    filter_manifest,
    load_manifest,
    pool,
    save_manifest,
    select_adaptation_subset,
)

from util import make_corpus, write_wav


def record(utt_id, language="hindi", duration=5.0, speaker="spk"):
    return UtteranceRecord(
        id=utt_id,
        language=language,
        family=corpus.FAMILY_OF_LANGUAGE[language],
        speaker=speaker,
        script="devanagari" if language in ("hindi", "rajasthani") else language,
        text="कमल",
        audio_path=f"/tmp/{utt_id}.wav",
        duration_sec=duration,
        sample_rate=22050,
    )


# ---------------------------------------------------------------------------
# records and manifest invariants

def test_family_consistency_enforced():
    with pytest.raises(corpus.CorpusError):
        UtteranceRecord(
            id="x", language="hindi", family="Dravidian", speaker="s",
            script="devanagari", text="कमल", audio_path="x.wav",
            duration_sec=1.0, sample_rate=22050,
        )


def test_positive_duration_and_rate_enforced():
    with pytest.raises(corpus.CorpusError):
        record("x", duration=0.0)
    with pytest.raises(corpus.CorpusError):
        UtteranceRecord(
            id="x", language="tamil", family="Dravidian", speaker="s",
            script="tamil", text="க", audio_path="x.wav",
            duration_sec=1.0, sample_rate=0,
        )


def test_manifest_rejects_duplicate_ids_and_bad_total():
    with pytest.raises(DuplicateIdError):
        Manifest.of([record("a"), record("a")])
    with pytest.raises(corpus.CorpusError):
        Manifest((record("a"),), (), 99.0)


# ---------------------------------------------------------------------------
# build_manifest

def test_build_manifest_cardinality_and_duration(tmp_path):
    root = make_corpus(tmp_path / "hi", "hindi", "spk1", [1.0, 2.0, 0.5])
    manifest = build_manifest(root, "hindi", "spk1")
    assert len(manifest.records) == 3
    assert manifest.records[0].duration_sec == pytest.approx(1.0)
    assert manifest.records[0].sample_rate == 22050
    assert manifest.total_duration_sec == pytest.approx(3.5)
    assert all(r.family == "IndoAryan" for r in manifest.records)


def test_build_manifest_one_second_exact(tmp_path):
    write_wav(tmp_path / "u0.wav", 1.0, sample_rate=22050)
    (tmp_path / "transcript.tsv").write_text("u0\tकमल\n", encoding="utf-8")
    manifest = build_manifest(tmp_path, "hindi", "spk")
    assert manifest.records[0].duration_sec == 1.0


def test_build_manifest_missing_audio(tmp_path):
    (tmp_path / "transcript.tsv").write_text("ghost\tकमल\n", encoding="utf-8")
    with pytest.raises(MissingAudioError):
        build_manifest(tmp_path, "hindi", "spk")


def test_build_manifest_malformed_transcript(tmp_path):
    (tmp_path / "transcript.tsv").write_text("no-tab-here\n", encoding="utf-8")
    with pytest.raises(TranscriptMismatchError):
        build_manifest(tmp_path, "hindi", "spk")


def test_build_manifest_duplicate_transcript_id(tmp_path):
    write_wav(tmp_path / "u0.wav", 0.5)
    (tmp_path / "transcript.tsv").write_text("u0\tकमल\nu0\tनमक\n", encoding="utf-8")
    with pytest.raises(TranscriptMismatchError):
        build_manifest(tmp_path, "hindi", "spk")


def test_build_manifest_unreadable_header(tmp_path):
    (tmp_path / "u0.wav").write_bytes(b"RIFFgarbage")
    (tmp_path / "transcript.tsv").write_text("u0\tकमल\n", encoding="utf-8")
    with pytest.raises(UnreadableHeaderError):
        build_manifest(tmp_path, "hindi", "spk")


def test_build_manifest_verify_catches_truncation(tmp_path):
    path = write_wav(tmp_path / "u0.wav", 1.0)
    data = path.read_bytes()
    path.write_bytes(data[:-2000])  # drop samples, keep header frame count
    (tmp_path / "transcript.tsv").write_text("u0\tकमल\n", encoding="utf-8")
    with pytest.raises(UnreadableHeaderError):
        build_manifest(tmp_path, "hindi", "spk", verify=True)


def test_manifest_round_trips_through_json_lines(tmp_path):
    root = make_corpus(tmp_path / "ta", "tamil", "spk2", [1.5, 2.5])
    manifest = build_manifest(root, "tamil", "spk2")
    path = tmp_path / "manifest.jsonl"
    save_manifest(manifest, path)
    loaded = load_manifest(path)
    assert loaded.records == manifest.records
    # Exact field names on disk.
    first = path.read_text(encoding="utf-8").splitlines()[0]
    for key in ("id", "language", "family", "speaker", "script", "text",
                "audioPath", "durationSec", "sampleRate"):
        assert f'"{key}"' in first


# ---------------------------------------------------------------------------
# clean_text

def test_clean_text_examples():
    assert clean_text("कमल" + chr(0) + "  कमल") == "कमल कमल"
    with pytest.raises(EmptyAfterCleaningError):
        clean_text("   ")


def test_clean_text_normalizes_decomposed_forms():
    assert clean_text("বো") == clean_text("বো")


def test_clean_text_punctuation_whitelist():
    assert clean_text("कमल। नमक?") == "कमल। नमक?"
    assert clean_text("कमल@#$%^&*नमक") == "कमल नमक"


# ---------------------------------------------------------------------------
# filter_manifest

def test_filter_boundary_semantics():
    manifest = Manifest.of([record("a", duration=14.9), record("b", duration=15.0),
                            record("c", duration=16.0)])
    kept = filter_manifest(manifest)
    assert [r.id for r in kept.records] == ["a", "b"]
    assert "dropped 1 of 3" in kept.provenance[-1]


def test_filter_idempotent():
    manifest = Manifest.of([record(f"u{i}", duration=d)
                            for i, d in enumerate([3.0, 15.0, 15.1, 20.0])])
    once = filter_manifest(manifest, 15.0)
    twice = filter_manifest(once, 15.0)
    assert twice.records == once.records


# ---------------------------------------------------------------------------
# pool

def test_pool_twenty_and_fifteen_hours():
    # 4 x 5 h Indo-Aryan and 3 x 5 h Dravidian metadata fixtures.
    five_hours = 5 * 3600.0
    aryan = [
        Manifest.of([record(f"{lang}_{i}", language=lang, duration=12.0, speaker=lang)
                     for i in range(1500)])
        for lang in ("bengali", "hindi", "odia", "rajasthani")
    ]
    pooled = pool(aryan, "IndoAryan")
    assert pooled.total_duration_sec == pytest.approx(4 * five_hours)
    assert len(pooled.records) == 6000

    dravidian = [
        Manifest.of([record(f"{lang}_{i}", language=lang, duration=12.0, speaker=lang)
                     for i in range(1500)])
        for lang in ("kannada", "malayalam", "telugu")
    ]
    pooled = pool(dravidian, "Dravidian")
    assert pooled.total_duration_sec == pytest.approx(3 * five_hours)


def test_pool_rejects_cross_family_without_flag():
    hindi = Manifest.of([record("h0", language="hindi")])
    tamil = Manifest.of([record("t0", language="tamil")])
    with pytest.raises(CrossFamilyPoolingError):
        pool([hindi, tamil], "IndoAryan")
    mixed = pool([hindi, tamil], "IndoAryan", allow_cross_family=True)
    assert len(mixed.records) == 2


def test_pool_duplicate_ids_rejected():
    a = Manifest.of([record("same")])
    b = Manifest.of([record("same")])
    with pytest.raises(DuplicateIdError):
        pool([a, b], "IndoAryan")


def test_pool_order_insensitive():
    a = Manifest.of([record("a1"), record("a2")])
    b = Manifest.of([record("b1")])
    forward = pool([a, b], "IndoAryan")
    backward = pool([b, a], "IndoAryan")
    assert forward.total_duration_sec == backward.total_duration_sec
    assert {r.id for r in forward.records} == {r.id for r in backward.records}


# ---------------------------------------------------------------------------
# select_adaptation_subset

def test_subset_uniform_durations_exact():
    manifest = Manifest.of([record(f"u{i:02d}", duration=60.0) for i in range(60)])
    subset = select_adaptation_subset(manifest, 7)
    assert len(subset.records) == 7
    assert subset.total_duration_sec == pytest.approx(420.0)


def test_subset_insufficient_data():
    manifest = Manifest.of([record(f"u{i}", duration=60.0) for i in range(20)])
    with pytest.raises(InsufficientDataError):
        select_adaptation_subset(manifest, 30)


def test_subset_bound_nesting_reproducible_100_pools():
    for seed in range(100):
        rng = random.Random(seed)
        records, total = [], 0.0
        while total < 1900.0:  # headroom past the 30-min target
            duration = rng.uniform(2.0, 15.0)
            records.append(record(f"u{len(records):03d}", duration=duration))
            total += duration
        manifest = Manifest.of(records)
        max_dur = max(r.duration_sec for r in manifest.records)
        subsets = {}
        for minutes in (7, 15, 30):
            subset = select_adaptation_subset(manifest, minutes, seed=seed)
            assert subset.total_duration_sec >= minutes * 60.0
            assert abs(subset.total_duration_sec - minutes * 60.0) <= max_dur
            subsets[minutes] = subset
        # Nesting: each smaller subset is a prefix of the larger one.
        ids7 = [r.id for r in subsets[7].records]
        ids15 = [r.id for r in subsets[15].records]
        ids30 = [r.id for r in subsets[30].records]
        assert ids15[: len(ids7)] == ids7
        assert ids30[: len(ids15)] == ids15
        # Byte-reproducible under the same seed.
        again = select_adaptation_subset(manifest, 7, seed=seed)
        assert [r.to_json() for r in again.records] == [
            r.to_json() for r in subsets[7].records
        ]


def test_subset_independent_of_input_order():
    rng = random.Random(7)
    records = [record(f"u{i:03d}", duration=rng.uniform(2.0, 15.0)) for i in range(100)]
    forward = Manifest.of(records)
    backward = Manifest.of(records[::-1])
    a = select_adaptation_subset(forward, 7, seed=3)
    b = select_adaptation_subset(backward, 7, seed=3)
    assert [r.id for r in a.records] == [r.id for r in b.records]
