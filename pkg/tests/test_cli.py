import csv
import io
import json

import gmpy2
import pytest
from gmpy2 import mpfr

from cantor_op.cli import main
from cantor_op.gamma import GammaSpec
from cantor_op.jacobi import jacobi_coefficients
from cantor_op.numeric import working
from cantor_op.tower import basic_intervals


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_capacity_quarter(capsys):
    code, out, _ = run(capsys, "capacity", "--gamma", "const:0.25")
    assert code == 0
    assert rows(out) == [{"capacity": "0.25", "log2_capacity": "-2.0"}]


def test_jacobi_quarter(capsys):
    code, out, _ = run(capsys, "jacobi", "--gamma", "const:0.25", "--n", "8")
    table = rows(out)
    assert code == 0 and len(table) == 8
    assert table[0]["a_n"].startswith("0.35355")
    with working(256):
        assert all(abs(mpfr(r["a_n"]) - mpfr(1) / 4) < 1e-70 for r in table[1:])
        assert all(abs(mpfr(r["log2_a_n"]) + 2) < 1e-70 for r in table[1:])


def test_widom_dyadic_sixth(capsys):
    code, out, _ = run(capsys, "widom", "--gamma", "const:1/6", "--dyadic", "--smax", "6")
    table = rows(out)
    assert code == 0 and len(table) == 6
    with working(256):
        root6 = gmpy2.sqrt(mpfr(6))
        assert all(abs(mpfr(r["W_n"]) - root6) < 1e-70 for r in table)


def test_widom_series(capsys):
    code, out, _ = run(capsys, "widom", "--gamma", "const:1/6", "--n", "8", "--precision", "64")
    table = rows(out)
    assert [r["is_dyadic"] for r in table] == ["1", "1", "0", "1", "0", "0", "0", "1"]


@pytest.mark.parametrize("bits", [64, 256, 1000])
def test_decimal_round_trip(capsys, bits):
    spec = GammaSpec.from_list(["1/5", "1/7"], "1/6", precision_bits=bits)
    _, out, _ = run(capsys, "jacobi", "--gamma", "list:1/5,1/7;tail=const:1/6", "--n", "12",
                    "--precision", str(bits))
    table = jacobi_coefficients(spec, 12)
    with working(bits):
        for r in rows(out):
            assert mpfr(r["a_n"]) == table.a(int(r["n"]))
    _, out, _ = run(capsys, "intervals", "--gamma", "list:1/5,1/7;tail=const:1/6", "--level", "3",
                    "--precision", str(bits))
    ivs = basic_intervals(spec, 3)
    with working(bits):
        for r, iv in zip(rows(out), ivs):
            assert mpfr(r["left"]) == iv.left and mpfr(r["right"]) == iv.right


def test_deterministic_output(capsys, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"o{i}.csv"
        assert main(["qpoly", "--gamma", "periodic:1/5,1/9", "--n", "13", "--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] and outs[0]


def test_json_format(capsys):
    code, out, _ = run(capsys, "nodes", "--gamma", "const:1/4", "--level", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["notes"] == []
    xs = [mpfr(r["x_k"]) for r in data["rows"]]
    assert len(xs) == 4 and xs == sorted(xs)


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "g.yaml"
    cfg.write_text("prefix: ['1/5']\ntail: {kind: repeat, values: ['1/6', '1/8']}\nprecision_bits: 128\n")
    code, out, _ = run(capsys, "capacity", "--config", str(cfg))
    assert code == 0
    with working(128):
        expected = gmpy2.exp(gmpy2.log(mpfr(1) / 5) / 2
                             + (gmpy2.log(mpfr(1) / 6) / 4 + gmpy2.log(mpfr(1) / 8) / 8) * 4 / 3)
        assert abs(mpfr(rows(out)[0]["capacity"]) - expected) < 1e-35


def test_presets_show_shift(capsys):
    code, out, _ = run(capsys, "presets")
    assert code == 0 and not out.startswith("#")
    assert [r["preset"] for r in rows(out)][0] == "uniform-quarter"
    code, out, _ = run(capsys, "presets", "--preset", "example4-sparse", "--sparse", "3,5")
    assert code == 0 and out.startswith("# example4-sparse")
    assert "shifted" in out.splitlines()[0]
    gammas = {r["s"]: r["gamma_s"] for r in rows(out)}
    assert gammas["3"] == "1/4" and gammas["5"] == "1/5" and gammas["4"] == "1/6"
    code, out, _ = run(capsys, "widom", "--preset", "example2-alternating", "--dyadic", "--smax", "3")
    assert code == 0 and "shifted" in out.splitlines()[0]


def test_moment_and_qpoly(capsys):
    code, out, _ = run(capsys, "moment", "--gamma", "const:1/6", "--aword", "4:2,2:1,1:2")
    assert code == 0 and rows(out)[0]["aword"] == "4:2,2:1,1:2"
    code, out, _ = run(capsys, "moment", "--gamma", "const:1/6", "--aword", "4:1")
    assert rows(out)[0]["integral"] == "0"
    code, out, _ = run(capsys, "qpoly", "--gamma", "const:1/6", "--n", "3")
    table = rows(out)
    assert [r["basis_degree"] for r in table] == ["1", "3"] and mpfr(table[1]["coefficient"]) == 1


def test_limits(capsys):
    code, out, _ = run(capsys, "limits", "--gamma", "const:1/6", "--j", "1", "--nn", "1",
                       "--smax", "8", "--precision", "128")
    table = rows(out)
    assert code == 0 and [int(r["index"]) for r in table] == [(1 << s) + 1 for s in range(1, 9)]
    devs = [mpfr(r["deviation"]) for r in table]
    assert all(x > y for x, y in zip(devs, devs[1:]))


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", "--gamma", "const:1/4", "--level", "8", "--m", "16",
                       "--tol", "1e-10")
    data = json.loads(out)
    assert code == 0 and data["pass"] is True and data["M"] == 16
    code, out, _ = run(capsys, "check", "--gamma", "const:1/4", "--level", "8", "--m", "16",
                       "--tol", "0")
    assert code == 1 and json.loads(out)["pass"] is False


@pytest.mark.parametrize("argv, code", [
    (["capacity", "--gamma", "const:1/3"], 3),
    (["capacity"], 3),
    (["bogus"], 3),
    (["capacity", "--gamma", "const:1/4", "--unknown"], 3),
    (["capacity", "--gamma", "const:1/4", "--precision", "32"], 3),
    (["capacity", "--gamma", "nonsense"], 3),
    (["capacity", "--config", "/nonexistent.yaml"], 3),
    (["presets", "--preset", "example2-alternating", "--kmin", "3"], 3),
    (["widom", "--gamma", "const:1/6"], 3),
    (["moment", "--gamma", "const:1/6", "--aword", "3:1"], 1),
    (["limits", "--gamma", "const:1/5", "--j", "1", "--nn", "1", "--smax", "3"], 1),
    (["check", "--gamma", "const:1/6", "--level", "4", "--m", "8", "--tol", "1"], 1),
    (["jacobi", "--gamma", "periodic:1/4,1/100", "--n", "4096", "--precision", "64",
      "--max-precision", "64"], 2),
])
def test_exit_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err
