"""Tests for configuration, probe journals and run manifests."""

import json
import os

from src.subdd.config import SubddConfig, budget, effective_threads
from src.subdd.journal import JournalEntry, ProbeJournal, load_journal, probed_set
from src.subdd.manifest import RunManifest, git_describe


def write_user_config(data):
    path = SubddConfig().get_config_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data) if isinstance(data, dict) else data)
    return path


class TestSubddConfig:
    def test_defaults(self):
        cfg = SubddConfig()
        assert cfg.get("integerBackend") == "exact"
        assert cfg.get("adjacencyTest") == "halfgraph"
        assert cfg.get("maxRays") == 0
        assert cfg.get("missing", 5) == 5

    def test_xdg_path(self):
        path = SubddConfig().get_config_path()
        assert path.parent.name == "subdd"
        assert str(path).startswith(os.environ["XDG_CONFIG_HOME"])

    def test_user_file_overrides(self):
        write_user_config({"maxRays": 1000, "adjacencyTest": "algebraic"})
        cfg = SubddConfig()
        assert cfg.get("maxRays") == 1000
        assert cfg.get("adjacencyTest") == "algebraic"

    def test_unknown_keys_ignored(self):
        write_user_config({"portForward": True})
        assert "portForward" not in SubddConfig().config

    def test_invalid_json_falls_back(self):
        write_user_config("{not json")
        assert SubddConfig().get("maxProbes") == 0

    def test_non_object_ignored(self):
        write_user_config("[1, 2]")
        assert SubddConfig().config == SubddConfig.DEFAULTS

    def test_vars_expanded(self, monkeypatch):
        monkeypatch.setenv("RUNS_DIR", "/data/runs")
        write_user_config({"manifestLocation": "${RUNS_DIR}/subdd", "defaultOrder": "${NOPE}"})
        cfg = SubddConfig()
        assert cfg.get("manifestLocation") == "/data/runs/subdd"
        assert cfg.get("defaultOrder") == "${NOPE}"

    def test_env_budgets(self, monkeypatch):
        monkeypatch.setenv("SUBDD_MAX_RAYS", "500000")
        monkeypatch.setenv("SUBDD_THREADS", "many")
        cfg = SubddConfig()
        assert cfg.get("maxRays") == 500000
        assert cfg.get("threads") == 0

    def test_helpers(self):
        assert budget(0) is None
        assert budget(None) is None
        assert budget(12) == 12
        assert effective_threads(3) == 3
        assert effective_threads(0) >= 1


class TestProbeJournal:
    def test_line_format(self):
        entry = JournalEntry((0, 1, 1), 4, 3, 1)
        assert entry.to_line() == "0 1 1 | 4 | 3 | 1"
        assert JournalEntry.from_line(entry.to_line()) == entry

    def test_append_and_load(self, tmp_path):
        path = tmp_path / "runs" / "bfs.journal"
        journal = ProbeJournal(path)
        journal.append(JournalEntry((1, 2), 5, 6, 2))
        journal.append(JournalEntry((0, 3), 7, 1, 0))
        entries = load_journal(path)
        assert entries == journal.entries
        assert probed_set(entries) == {(1, 2), (0, 3)}

    def test_malformed_lines_skipped(self, tmp_path):
        path = tmp_path / "bfs.journal"
        path.write_text("# campaign\n1 2 | 5 | 6 | 2\nbroken line\n | 1 | 2 | 3\n")
        assert [e.canonical for e in load_journal(path)] == [(1, 2)]

    def test_missing_file(self, tmp_path):
        assert load_journal(tmp_path / "none.journal") == []

    def test_memory_only(self):
        journal = ProbeJournal(None)
        journal.append(JournalEntry((1,), 1, 1, 1))
        assert len(journal.entries) == 1


class TestRunManifest:
    def config(self, tmp_path, enabled=True):
        return {"saveRunManifests": enabled, "manifestLocation": str(tmp_path / "runs")}

    def test_written_next_to_output(self, tmp_path):
        manifest = RunManifest("dd", self.config(tmp_path))
        output = tmp_path / "rays.txt"
        manifest.set_run_info({"n": 4, "output": output}, n=4, order="topt", seed=0)
        manifest.add_input("-")
        manifest.add_output(output)
        manifest.record(rays=37)
        path = manifest.finalize("complete")
        assert path == tmp_path / "rays.txt.manifest.json"
        data = json.loads(path.read_text())
        assert data["exit_reason"] == "complete"
        assert data["results"] == {"rays": 37}
        assert data["arguments"]["output"] == str(output)
        assert data["inputs"] == []
        assert data["duration_seconds"] >= 0

    def test_falls_back_to_folder(self, tmp_path):
        manifest = RunManifest("estimate", self.config(tmp_path))
        path = manifest.finalize("error")
        assert path.parent == tmp_path / "runs"
        assert path.name.startswith("estimate_")

    def test_disabled(self, tmp_path):
        assert RunManifest("dd", self.config(tmp_path, enabled=False)).finalize("complete") is None
        assert RunManifest("dd").finalize("complete") is None

    def test_git_describe(self):
        assert git_describe()
