from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

from simbias.cli import main

from .test_metrics import run_fixture_audit


def run_cli(*argv: str) -> int:
    return main(list(argv))


def audit_args(fixtures_dir: Path, out: Path, *extra: str) -> list[str]:
    return [
        "audit",
        "--src-vec",
        str(fixtures_dir / "en.vec"),
        "--dst-vec",
        str(fixtures_dir / "it.vec"),
        "--lexicon",
        str(fixtures_dir / "lexicon.tsv"),
        "--out",
        str(out),
        *extra,
    ]


class TestAuditCommand:
    def test_happy_path_emits_json_and_csv(self, fixtures_dir, tmp_path, capsys):
        code = run_cli(*audit_args(fixtures_dir, tmp_path / "report"))
        captured = capsys.readouterr()
        assert code == 0
        out = tmp_path / "report"
        assert (out / "audit.json").exists()
        assert (out / "records_src.csv").exists()
        assert not (out / "audit.md").exists()
        assert "entries: 333" in captured.err

    def test_missing_lexicon_names_path(self, fixtures_dir, tmp_path, capsys):
        code = run_cli(
            "audit",
            "--src-vec",
            str(fixtures_dir / "en.vec"),
            "--dst-vec",
            str(fixtures_dir / "it.vec"),
            "--lexicon",
            str(tmp_path / "missing.tsv"),
            "--out",
            str(tmp_path / "report"),
        )
        captured = capsys.readouterr()
        assert code == 1
        assert "missing.tsv" in captured.err

    def test_histogram_csv_carries_calibrated_counts(self, fixtures_dir, tmp_path):
        run_cli(*audit_args(fixtures_dir, tmp_path / "report"))
        rows = (tmp_path / "report" / "histogram_src.csv").read_text().splitlines()
        counts = [int(row.split(",")[-1]) for row in rows[1:]]
        assert counts == [123, 95, 78, 30, 7]

    def test_markdown_format_flag(self, fixtures_dir, tmp_path):
        code = run_cli(*audit_args(fixtures_dir, tmp_path / "report", "--format", "markdown"))
        assert code == 0
        files = sorted(p.name for p in (tmp_path / "report").iterdir())
        assert files == ["audit.md"]

    def test_reruns_are_byte_identical(self, fixtures_dir, tmp_path):
        first = tmp_path / "first"
        second = tmp_path / "second"
        assert run_cli(*audit_args(fixtures_dir, first, "--format", "json", "--format", "csv", "--format", "markdown")) == 0
        assert run_cli(*audit_args(fixtures_dir, second, "--format", "json", "--format", "csv", "--format", "markdown")) == 0
        first_files = sorted(p.name for p in first.iterdir())
        second_files = sorted(p.name for p in second.iterdir())
        assert first_files == second_files
        for name in first_files:
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_json_matches_library_audit(self, fixtures_dir, tmp_path, en_table, it_table):
        from simbias import parse_audit_json

        run_cli(*audit_args(fixtures_dir, tmp_path / "report"))
        rendered = parse_audit_json((tmp_path / "report" / "audit.json").read_bytes())
        assert rendered == run_fixture_audit(en_table, it_table, fixtures_dir)

    def test_bad_bin_width_is_input_error(self, fixtures_dir, tmp_path, capsys):
        code = run_cli(*audit_args(fixtures_dir, tmp_path / "r", "--bin-width", "0"))
        assert code == 1
        assert "bin width" in capsys.readouterr().err

    def test_config_file_precedence(self, fixtures_dir, tmp_path, capsys):
        config = tmp_path / "run.cfg"
        config.write_text(
            "\n".join(
                [
                    f"src_vec={fixtures_dir / 'en.vec'}",
                    f"dst_vec={fixtures_dir / 'it.vec'}",
                    f"lexicon={fixtures_dir / 'lexicon.tsv'}",
                    "bin_width=0.2",
                    "format=json",
                ]
            )
            + "\n"
        )
        out = tmp_path / "report"
        code = run_cli("audit", "--config", str(config), "--out", str(out), "--bin-width", "0.1")
        assert code == 0
        payload = json.loads((out / "audit.json").read_bytes())
        # the flag overrides the config file value
        assert payload["audit"]["settings"]["bin_width"] == 0.1


class TestNetworkCommand:
    def test_threshold_out_of_range(self, fixtures_dir, tmp_path, capsys):
        code = run_cli(
            "network",
            "--src-vec",
            str(fixtures_dir / "en.vec"),
            "--lexicon",
            str(fixtures_dir / "lexicon.tsv"),
            "--threshold",
            "1.1",
            "--out",
            str(tmp_path / "net"),
        )
        assert code == 1
        assert "threshold" in capsys.readouterr().err

    def test_orthogonal_words_empty_edge_file(self, tmp_path, capsys):
        vec = tmp_path / "ortho.vec"
        vec.write_text("3 3\na 1 0 0\nb 0 1 0\nc 0 0 1\n")
        words = tmp_path / "words.txt"
        words.write_text("a\nb\nc\n")
        out = tmp_path / "net"
        code = run_cli(
            "network",
            "--src-vec",
            str(vec),
            "--words",
            str(words),
            "--threshold",
            "0.5",
            "--out",
            str(out),
        )
        assert code == 0
        assert (out / "edges.csv").read_bytes() == b"source,target,weight\n"
        assert (out / "network.dot").exists()

    def test_format_flag_narrows_exports(self, tmp_path):
        vec = tmp_path / "pair.vec"
        vec.write_text("2 2\na 1 1\nb 1 1\n")
        words = tmp_path / "words.txt"
        words.write_text("a\nb\n")
        out = tmp_path / "net"
        code = run_cli(
            "network",
            "--src-vec", str(vec),
            "--words", str(words),
            "--format", "dot",
            "--out", str(out),
        )
        assert code == 0
        assert sorted(p.name for p in out.iterdir()) == ["network.dot"]

    def test_audit_only_format_rejected(self, tmp_path, capsys):
        vec = tmp_path / "pair.vec"
        vec.write_text("2 2\na 1 1\nb 1 1\n")
        words = tmp_path / "words.txt"
        words.write_text("a\nb\n")
        code = run_cli(
            "network",
            "--src-vec", str(vec),
            "--words", str(words),
            "--format", "markdown",
            "--out", str(tmp_path / "net"),
        )
        assert code == 1
        assert "does not apply" in capsys.readouterr().err

    def test_export_matches_library_export(self, fixtures_dir, tmp_path):
        from simbias import build_similarity_network, export_network, parse_embedding_file, parse_lexicon

        out = tmp_path / "net"
        code = run_cli(
            "network",
            "--src-vec",
            str(fixtures_dir / "en.vec"),
            "--lexicon",
            str(fixtures_dir / "lexicon.tsv"),
            "--out",
            str(out),
        )
        assert code == 0
        table = parse_embedding_file((fixtures_dir / "en.vec").read_bytes(), "en")
        lexicon = parse_lexicon((fixtures_dir / "lexicon.tsv").read_bytes()).lexicon
        net = build_similarity_network(table, list(lexicon.source_surfaces()), 0.3)
        assert (out / "edges.csv").read_bytes() == export_network(net, "edge-csv")
        assert (out / "network.dot").read_bytes() == export_network(net, "dot")


HEADER = "source\ttarget\tsource_gender\ttarget_gender"


class TestTranslateCommand:
    def write_pending(self, tmp_path: Path) -> Path:
        lexicon = tmp_path / "pending.tsv"
        lexicon.write_text(
            "\n".join(
                [
                    HEADER,
                    "architect\t\tneutral\t",
                    "nurse\t\tneutral\t",
                    "doctor\tmedico\tneutral\tmasculine",
                ]
            )
            + "\n"
        )
        return lexicon

    def test_cache_only_full_cache(self, tmp_path, capsys):
        lexicon = self.write_pending(tmp_path)
        cache = tmp_path / "cache.tsv"
        cache.write_text("architect\tarchitetto\nnurse\tinfermiera\n")
        out = tmp_path / "filled"
        code = run_cli(
            "translate", "--lexicon", str(lexicon), "--cache", str(cache), "--out", str(out)
        )
        assert code == 0
        text = (out / "lexicon.tsv").read_text()
        assert "architect\tarchitetto\tneutral\tunknown" in text
        assert "nurse\tinfermiera\tneutral\tunknown" in text

    def test_partial_cache_warns_and_leaves_empty(self, tmp_path, capsys):
        lexicon = self.write_pending(tmp_path)
        cache = tmp_path / "cache.tsv"
        cache.write_text("architect\tarchitetto\n")
        out = tmp_path / "filled"
        code = run_cli(
            "translate", "--lexicon", str(lexicon), "--cache", str(cache), "--out", str(out)
        )
        captured = capsys.readouterr()
        assert code == 0
        assert "no translation available for 'nurse'" in captured.err
        assert "nurse\t\tneutral\t" in (out / "lexicon.tsv").read_text()

    def test_idempotent_on_filled_output(self, tmp_path):
        lexicon = self.write_pending(tmp_path)
        cache = tmp_path / "cache.tsv"
        cache.write_text("architect\tarchitetto\nnurse\tinfermiera\n")
        first = tmp_path / "first"
        run_cli("translate", "--lexicon", str(lexicon), "--cache", str(cache), "--out", str(first))
        second = tmp_path / "second"
        code = run_cli(
            "translate",
            "--lexicon",
            str(first / "lexicon.tsv"),
            "--cache",
            str(cache),
            "--out",
            str(second),
        )
        assert code == 0
        assert (first / "lexicon.tsv").read_bytes() == (second / "lexicon.tsv").read_bytes()

    def test_missing_provider_and_cache(self, tmp_path, capsys):
        lexicon = self.write_pending(tmp_path)
        code = run_cli("translate", "--lexicon", str(lexicon), "--out", str(tmp_path / "o"))
        assert code == 1
        assert "cache" in capsys.readouterr().err


class TestAuditWithCache:
    def test_cache_fills_before_auditing(self, tmp_path, capsys):
        vec_en = tmp_path / "en.vec"
        vec_en.write_text("4 2\nshe 1 0\nhe 0 1\nnurse 0.9 0.1\ndoctor 0.2 0.8\n")
        vec_it = tmp_path / "it.vec"
        vec_it.write_text("4 2\nlei 1 0\nlui 0 1\ninfermiera 0.95 0.05\nmedico 0.3 0.7\n")
        lexicon = tmp_path / "lex.tsv"
        lexicon.write_text(
            HEADER + "\nnurse\t\tneutral\t\ndoctor\tmedico\tneutral\tmasculine\n"
        )
        cache = tmp_path / "cache.tsv"
        cache.write_text("nurse\tinfermiera\n")
        out = tmp_path / "report"
        code = run_cli(
            "audit",
            "--src-vec", str(vec_en),
            "--dst-vec", str(vec_it),
            "--lexicon", str(lexicon),
            "--cache", str(cache),
            "--targets", "she,he,lei,lui",
            "--format", "json",
            "--out", str(out),
        )
        assert code == 0
        payload = json.loads((out / "audit.json").read_bytes())
        dst_words = [r["word"] for r in payload["audit"]["dst"]["records"]]
        assert dst_words == ["infermiera", "medico"]
        # the filled entry has gender unknown, so the shift matrix is skipped
        assert payload["audit"]["shift_matrix"] is None
        assert "nurse" in payload["audit"]["shift_matrix_skipped"]


class TestTranslateWithLiveProvider:
    def test_live_provider_extends_cache(self, tmp_path, monkeypatch):
        import simbias.pipeline as pipeline

        class FakeProvider:
            def translate(self, word, source_lang, target_lang):
                return {"nurse": "infermiera"}.get(word)

        monkeypatch.setattr(pipeline, "_http_provider", lambda config: FakeProvider())
        lexicon = tmp_path / "lex.tsv"
        lexicon.write_text(HEADER + "\nnurse\t\tneutral\t\n")
        cache = tmp_path / "cache.tsv"
        cache.write_text("architect\tarchitetto\n")
        provider_config = tmp_path / "provider.cfg"
        provider_config.write_text("base_url=https://translate.invalid/v1\n")
        out = tmp_path / "filled"
        code = run_cli(
            "translate",
            "--lexicon", str(lexicon),
            "--cache", str(cache),
            "--provider-config", str(provider_config),
            "--out", str(out),
        )
        assert code == 0
        assert "nurse\tinfermiera\tneutral\tunknown" in (out / "lexicon.tsv").read_text()
        assert cache.read_text() == "architect\tarchitetto\nnurse\tinfermiera\n"

    def test_provider_config_without_base_url(self, tmp_path, capsys):
        lexicon = tmp_path / "lex.tsv"
        lexicon.write_text(HEADER + "\nnurse\t\tneutral\t\n")
        provider_config = tmp_path / "provider.cfg"
        provider_config.write_text("text_field=q\n")
        code = run_cli(
            "translate",
            "--lexicon", str(lexicon),
            "--provider-config", str(provider_config),
            "--out", str(tmp_path / "o"),
        )
        assert code == 1
        assert "base_url" in capsys.readouterr().err


class TestEntryPoint:
    def test_module_invocation(self, fixtures_dir, tmp_path):
        result = subprocess.run(
            [
                sys.executable,
                "-m",
                "simbias",
                *audit_args(fixtures_dir, tmp_path / "report", "--format", "json"),
            ],
            capture_output=True,
            text=True,
            cwd="/root/pkg",
        )
        assert result.returncode == 0, result.stderr
        assert (tmp_path / "report" / "audit.json").exists()

    def test_internal_errors_map_to_exit_2(self, fixtures_dir, tmp_path, capsys, monkeypatch):
        import simbias.cli

        def boom(config):
            raise RuntimeError("wires crossed")

        monkeypatch.setattr(simbias.cli, "run_audit", boom)
        code = run_cli(*audit_args(fixtures_dir, tmp_path / "report"))
        assert code == 2
        assert "internal error" in capsys.readouterr().err

    def test_unreadable_vec_file_is_input_error(self, tmp_path, capsys):
        code = run_cli(
            "audit",
            "--src-vec",
            str(tmp_path / "nope.vec"),
            "--dst-vec",
            str(tmp_path / "nope2.vec"),
            "--lexicon",
            str(tmp_path / "nope.tsv"),
            "--out",
            str(tmp_path / "out"),
        )
        assert code == 1
        assert "nope.vec" in capsys.readouterr().err
