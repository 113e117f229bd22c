"""Command line behavior: subcommands, reports, exit codes, fix application."""

import json
import shutil

import pytest

from conftest import FIXTURES
from rslkit.cli import main


def copy_fixture(tmp_path, name):
    dst = tmp_path / name
    shutil.copy(FIXTURES / name, dst)
    return dst


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_clean_exits_zero(self, capsys):
        code, out, _ = run(["check", str(FIXTURES / "billing_clean.rsl")], capsys)
        assert code == 0
        assert "0 error(s), 0 warning(s)" in out

    def test_defects_exit_one(self, capsys):
        code, out, _ = run(["check", str(FIXTURES / "billing_defects.rsl")], capsys)
        assert code == 1
        assert "RSL-V001" in out and "RSL-V002" in out and "RSL-V003" in out

    def test_human_format_line_structure(self, capsys):
        path = str(FIXTURES / "billing_defects.rsl")
        _, out, _ = run(["check", path], capsys)
        first = next(line for line in out.splitlines() if "RSL-V001" in line)
        location, rest = first.split(": error ", 1)
        fname, line_no, col = location.rsplit(":", 2)
        assert fname == path and line_no.isdigit() and col.isdigit()
        assert rest.startswith("RSL-V001:")

    def test_json_report_round_trips(self, capsys):
        path = str(FIXTURES / "billing_defects.rsl")
        code, out, _ = run(["check", "--format", "json", path], capsys)
        assert code == 1
        report = json.loads(out)
        assert report["version"] == 1
        (entry,) = [f for f in report["files"] if f["path"] == path]
        codes = {d["code"] for d in entry["diagnostics"]}
        assert {"RSL-V001", "RSL-V002", "RSL-V003", "RSL-L001"} <= codes
        for d in entry["diagnostics"]:
            assert {"code", "severity", "message", "range", "fixes"} <= set(d)
            assert d["range"]["start"]["line"] >= 1

    def test_missing_file_is_usage_error(self, capsys):
        code, _, err = run(["check", "no_such_file.rsl"], capsys)
        assert code == 2
        assert "cannot read" in err

    def test_include_needs_system_mapping(self, capsys):
        path = str(FIXTURES / "billing_include.rsl")
        code, out, _ = run(["check", path], capsys)
        assert code == 1  # unresolved system
        code, out, _ = run(
            ["check", path, "--system", f"SystemRules={FIXTURES / 'system_rules.rsl'}"],
            capsys,
        )
        assert code == 0
        assert "RSL-I001" in out

    def test_manifest_mapping(self, tmp_path, capsys):
        doc = copy_fixture(tmp_path, "billing_include.rsl")
        copy_fixture(tmp_path, "system_rules.rsl")
        manifest = tmp_path / "workspace.txt"
        manifest.write_text("SystemRules=system_rules.rsl\n")
        code, _, _ = run(["check", str(doc), "--manifest", str(manifest)], capsys)
        assert code == 0


class TestFix:
    def test_dry_run_leaves_file_untouched(self, tmp_path, capsys):
        doc = copy_fixture(tmp_path, "billing_defects.rsl")
        before = doc.read_text()
        code, out, _ = run(["fix", "--dry-run", "--create-missing", str(doc)], capsys)
        assert doc.read_text() == before
        assert "---" in out and "+++" in out  # unified diff shown
        assert code == 0  # post-fix state would be error free

    def test_apply_then_recheck_clean(self, tmp_path, capsys):
        doc = copy_fixture(tmp_path, "billing_defects.rsl")
        code, _, _ = run(["fix", "--apply", "--create-missing", str(doc)], capsys)
        assert code == 0
        code, out, _ = run(["check", str(doc)], capsys)
        assert code == 0
        assert "0 error(s), 0 warning(s)" in out

    def test_apply_is_idempotent(self, tmp_path, capsys):
        doc = copy_fixture(tmp_path, "billing_defects.rsl")
        run(["fix", "--apply", "--create-missing", str(doc)], capsys)
        after_first = doc.read_text()
        run(["fix", "--apply", "--create-missing", str(doc)], capsys)
        assert doc.read_text() == after_first

    def test_without_create_missing_rule_violation_remains(self, tmp_path, capsys):
        doc = copy_fixture(tmp_path, "billing_defects.rsl")
        code, _, _ = run(["fix", "--apply", str(doc)], capsys)
        assert code == 1  # the missing-entity error persists
        _, out, _ = run(["check", str(doc)], capsys)
        assert "RSL-L001" in out and "RSL-V001" not in out

    def test_mode_flag_required(self, capsys):
        code, _, _ = run(["fix", str(FIXTURES / "billing_defects.rsl")], capsys)
        assert code == 2

    def test_clean_file_reports_nothing_to_do(self, tmp_path, capsys):
        doc = copy_fixture(tmp_path, "billing_clean.rsl")
        code, out, _ = run(["fix", "--apply", str(doc)], capsys)
        assert code == 0
        assert "no applicable fixes" in out


class TestGen:
    def test_json_generation(self, tmp_path, capsys):
        out_path = tmp_path / "doc.json"
        code, _, _ = run(
            ["gen", "json", str(FIXTURES / "billing_clean.rsl"), "-o", str(out_path)], capsys
        )
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert doc["language"] == "English"

    def test_text_generation(self, tmp_path, capsys):
        out_path = tmp_path / "doc.txt"
        code, _, _ = run(
            ["gen", "text", str(FIXTURES / "billing_clean.rsl"), "-o", str(out_path)], capsys
        )
        assert code == 0
        assert "== UseCase:" in out_path.read_text()

    def test_template_generation(self, tmp_path, capsys):
        out_path = tmp_path / "doc.txt"
        code, _, _ = run(
            [
                "gen",
                "template",
                str(FIXTURES / "billing_clean.rsl"),
                "--template",
                str(FIXTURES / "stakeholders.tpl"),
                "-o",
                str(out_path),
            ],
            capsys,
        )
        assert code == 0
        assert out_path.read_text().startswith("Stakeholder Finance Team")

    @pytest.mark.parametrize("kind", ["json", "text", "template"])
    def test_invalid_spec_refused_for_all_kinds(self, kind, tmp_path, capsys):
        out_path = tmp_path / "out"
        argv = ["gen", kind, str(FIXTURES / "billing_defects.rsl"), "-o", str(out_path)]
        if kind == "template":
            argv += ["--template", str(FIXTURES / "stakeholders.tpl")]
        code, out, _ = run(argv, capsys)
        assert code == 1
        assert not out_path.exists(), "refused generation must not write output"
        assert "generation refused" in out

    def test_template_kind_requires_template(self, tmp_path, capsys):
        code, _, err = run(
            ["gen", "template", str(FIXTURES / "billing_clean.rsl"), "-o", str(tmp_path / "x")],
            capsys,
        )
        assert code == 2

    def test_strict_template_error_exits_one(self, tmp_path, capsys):
        out_path = tmp_path / "x"
        code, _, err = run(
            [
                "gen",
                "template",
                str(FIXTURES / "billing_clean.rsl"),
                "--template",
                str(FIXTURES / "unknown_tag.tpl"),
                "-o",
                str(out_path),
            ],
            capsys,
        )
        assert code == 1
        assert "template error" in err
        assert not out_path.exists()

    def test_lenient_template_succeeds(self, tmp_path, capsys):
        out_path = tmp_path / "x"
        code, _, _ = run(
            [
                "gen",
                "template",
                str(FIXTURES / "billing_clean.rsl"),
                "--template",
                str(FIXTURES / "unknown_tag.tpl"),
                "-o",
                str(out_path),
                "--lenient",
            ],
            capsys,
        )
        assert code == 0
        assert out_path.read_text() == "Hello !\n"


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["frobnicate"]) == 2
