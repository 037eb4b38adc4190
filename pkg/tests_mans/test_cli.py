#!/usr/bin/env python3
"""
Тесты командной строки mzvq: коды возврата, форматы вывода, детерминированность
"""

import csv
import io
import json
import os
import sys
from contextlib import contextmanager, redirect_stderr, redirect_stdout
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import mzvq
from reports import RationalRecord
from series_lab import q_rational_table
from settings import reset_settings


@contextmanager
def settings_env(**values):
    """Временное переопределение настроек через MZVQ_* переменные окружения."""
    saved = {}
    for key, value in values.items():
        name = f"MZVQ_{key.upper()}"
        saved[name] = os.environ.get(name)
        os.environ[name] = str(value)
    reset_settings()
    try:
        yield
    finally:
        for name, value in saved.items():
            if value is None:
                os.environ.pop(name, None)
            else:
                os.environ[name] = value
        reset_settings()


def run(*argv):
    """Запуск mzvq.main с перехватом stdout и stderr."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = mzvq.main(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_eval_zeta_four_four():
    code, out, _ = run("eval", "4,4", "--prec", "1e-12")
    assert code == 0
    assert "ζ(4,4) = 0.0836" in out


def test_eval_json():
    code, out, _ = run("eval", "2,1", "--format", "json")
    assert code == 0
    record = json.loads(out)
    assert record["kind"] == "value"
    assert record["value"].startswith("1.2020569031")


def test_eval_divergent():
    code, out, err = run("eval", "1,2")
    assert code == 2
    assert out == ""
    assert "divergent: s1 must be ≥ 2" in err


def test_q_all_diagonal():
    code, out, _ = run("q", "--n", "3", "--d", "3", "--method", "all")
    assert code == 0
    assert "Q(12,3) [theorem] = 1/681080400 · π^12" in out
    assert "Q(12,3) [series] = 1/681080400 · π^12" in out
    assert "[bruteforce]" in out
    assert "❌" not in out


def test_q_theorem_requires_depth_three():
    code, _, err = run("q", "--n", "5", "--d", "2", "--method", "theorem")
    assert code == 2
    assert "theorem requires n ≥ d ≥ 3" in err


def test_q_depth2():
    code, out, _ = run("q", "--n", "2", "--d", "2", "--method", "depth2")
    assert code == 0
    assert "1/113400 · π^8" in out


def test_q_series_json():
    code, out, _ = run("q", "--n", "4", "--d", "3", "--method", "series", "--format", "json")
    assert code == 0
    line = out.strip()
    record = json.loads(line)
    assert record["kind"] == "rational"
    assert record["pi_power"] == 16
    assert isinstance(record["num"], str) and isinstance(record["den"], str)
    assert Fraction(int(record["num"]), int(record["den"])) == q_rational_table(4, 3)[4][3]
    assert RationalRecord.model_validate_json(line).model_dump_json() == line


def test_verify_product():
    code, out, _ = run("verify", "--suite", "product", "--max-n", "20")
    assert code == 0
    assert sum(1 for line in out.splitlines() if line.startswith("✅")) == 19


def test_verify_ode_tilde():
    code, out, _ = run("verify", "--suite", "ode-tilde", "--max-n", "8")
    assert code == 0
    assert sum(1 for line in out.splitlines() if line.startswith("✅")) == 32


def test_verify_euler():
    code, out, _ = run("verify", "--suite", "euler", "--max-n", "4", "--prec", "1e-12")
    assert code == 0
    assert "❌" not in out


def test_verify_json_reports():
    code, out, _ = run("verify", "--suite", "diagonal,w-binomial", "--max-n", "4", "--max-d", "5",
                       "--format", "json")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert records
    assert all(r["kind"] == "report" and r["passed"] for r in records)


def test_verify_unknown_suite():
    code, _, err = run("verify", "--suite", "nonexistent")
    assert code == 2
    assert "nonexistent" in err


def test_series_text():
    code, out, _ = run("series", "--max-n", "2", "--max-d", "2")
    assert code == 0
    for expected in ("c[1][1] = 1/90", "c[1][2] = 0", "c[2][1] = 1/9450", "c[2][2] = 1/113400"):
        assert expected in out


def test_series_above_diagonal():
    code, out, _ = run("series", "--max-n", "1", "--max-d", "3")
    assert code == 0
    assert "c[1][2] = 0" in out
    assert "c[1][3] = 0" in out


def test_series_csv():
    code, out, _ = run("series", "--max-n", "12", "--max-d", "12", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 13
    assert all(len(row) == 13 for row in rows)
    assert rows[1][1] == "1/90"


def test_series_json_pairs():
    code, out, _ = run("series", "--max-n", "2", "--max-d", "2", "--format", "json")
    assert code == 0
    record = json.loads(out)
    assert record["rows"][0][0] == ["1", "90"]
    assert record["rows"][0][1] == ["0", "1"]


def test_deterministic_output():
    first = run("series", "--max-n", "6", "--max-d", "6", "--format", "json")
    second = run("series", "--max-n", "6", "--max-d", "6", "--format", "json")
    assert first == second
    first = run("eval", "3,2", "--format", "json")
    second = run("eval", "3,2", "--format", "json")
    assert first == second


def test_ode_check():
    code, out, _ = run("ode-check", "--max-n", "3", "--max-d", "2")
    assert code == 0
    assert "gd-decomposition" in out
    assert "❌" not in out


def test_verify_all_flag():
    flagged = run("verify", "--all", "--max-n", "3")
    named = run("verify", "--suite", "all", "--max-n", "3")
    assert flagged[0] == 0
    assert flagged == named
    assert "ode-tilde" in flagged[1] and "product" in flagged[1]


def test_verify_stuffle_default_pairs():
    code, out, _ = run("verify", "--suite", "stuffle")
    assert code == 0
    for pair in ("stuffle(4,4)", "stuffle(4,8)", "stuffle(8,4)", "stuffle(6,6)"):
        assert pair in out


def test_verify_keeps_reports_after_suite_error():
    """Недостижимая точность в одном наборе не отменяет результаты остальных."""
    with settings_env(max_cutoff=64, tail_correction="false"):
        code, out, err = run("verify", "--suite", "product,euler", "--max-n", "3")
    assert code == 1
    lines = out.splitlines()
    assert sum(1 for line in lines if line.startswith("✅ euler_product")) == 2
    assert any(line.startswith("❌ euler()") and "precision unreachable" in line for line in lines)
    assert "📊 Всего: 3" in out
    assert "❌" not in err


def test_q_all_csv_single_table():
    code, out, _ = run("q", "--n", "3", "--d", "3", "--method", "all", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["label", "kind", "num", "den", "pi_power", "value", "abs_err", "passed"]
    assert all(len(row) == len(rows[0]) for row in rows)
    labels = [row[0] for row in rows[1:]]
    assert "Q(12,3) [theorem]" in labels
    assert "agree:theorem-series" in labels
    assert all(row[7] == "True" for row in rows[1:] if row[1] == "report")


def test_prec_must_be_positive():
    for value in ("0", "-1e-5"):
        code, out, err = run("eval", "4,4", f"--prec={value}")
        assert code == 2
        assert out == ""
        assert "--prec" in err
        assert "math domain error" not in err


def test_usage_error():
    code, _, _ = run("q", "--n", "3")
    assert code == 2


def main():
    """Главная функция."""
    print("🚀 Тесты командной строки")
    print("=" * 50)
    tests = [(name, func) for name, func in globals().items() if name.startswith("test_") and callable(func)]
    failed = 0
    for name, func in tests:
        try:
            func()
            print(f"✅ {name}")
        except Exception as e:
            failed += 1
            print(f"❌ {name}: {e}")
    print("\n" + "=" * 50)
    print(f"📊 Пройдено: {len(tests) - failed}/{len(tests)}")
    return failed == 0


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
