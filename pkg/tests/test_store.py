"""Durability: append-only logs, torn-line recovery, corruption detection."""

from __future__ import annotations

import json

import pytest

from teachplan.scenarios import run_suite
from teachplan.store import CorruptLog, NotFound, SessionStore


def test_save_load_round_trip_export_is_byte_identical(tmp_path):
    store = SessionStore(tmp_path)
    session, results, _ = run_suite(4, store)
    assert all(r.passed for r in results)
    loaded, warnings = store.load_session(session.id)
    assert warnings == []
    assert loaded.export_pddl() == session.export_pddl()
    assert loaded.events == session.events


def test_load_unknown_id(tmp_path):
    with pytest.raises(NotFound):
        SessionStore(tmp_path).load_session("missing")


def test_torn_final_line_is_dropped_with_warning(tmp_path):
    store = SessionStore(tmp_path)
    session, _, _ = run_suite(2, store)
    path = tmp_path / f"{session.id}.jsonl"
    with path.open("a", encoding="utf-8") as fh:
        fh.write('{"type": "goal_set", "literals": ["at(blueO')  # interrupted write
    loaded, warnings = store.load_session(session.id)
    assert len(warnings) == 1 and "torn" in warnings[0]
    assert len(loaded.events) == len(session.events)
    assert loaded.export_pddl() == session.export_pddl()


def test_corrupt_middle_line_raises(tmp_path):
    store = SessionStore(tmp_path)
    session, _, _ = run_suite(1, store)
    path = tmp_path / f"{session.id}.jsonl"
    lines = path.read_text().splitlines()
    lines[0] = '{"broken'
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(CorruptLog):
        store.load_session(session.id)


def test_incremental_sync_appends_once(tmp_path):
    store = SessionStore(tmp_path)
    session, _, _ = run_suite(1)
    watermark = store.sync(session, 0)
    assert watermark == len(session.events)
    watermark = store.sync(session, watermark)
    path = tmp_path / f"{session.id}.jsonl"
    lines = [json.loads(line) for line in path.read_text().splitlines()]
    assert len(lines) == len(session.events)


def test_bad_session_id_rejected(tmp_path):
    store = SessionStore(tmp_path)
    with pytest.raises(ValueError):
        store.load_session("../escape")
