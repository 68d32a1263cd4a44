import csv
import io
import json
import math
import subprocess
import sys

import pytest

from adaptmc.cli import COMPARE_FIELDS, main, mesh_from_dict


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_kv(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


def test_integrate_const(capsys):
    code, out, _ = run(capsys, "integrate", "--fn", "const", "--c", "7", "--N", "100")
    kv = parse_kv(out)
    assert code == 0
    assert float(kv["estimate"]) == 7.0
    assert kv["stop_level"] == "1"
    assert float(kv["relative_error"]) == 0.0


def test_integrate_disc(capsys):
    code, out, _ = run(capsys, "integrate", "--fn", "disc", "--N", "10000", "--L", "6",
                       "--N0", "4", "--Cm", "2", "--Mrp", "2", "--seed", "42")
    kv = parse_kv(out)
    assert code == 0
    assert abs(float(kv["estimate"]) - math.pi / 4) < 0.01
    assert len(kv["variance_trace"].split()) == 6


def test_integrate_json(tmp_path, capsys):
    out = tmp_path / "run.json"
    assert run(capsys, "integrate", "--fn", "gauss2d", "--alpha", "50", "--N", "10000",
               "--L", "6", "--out", str(out))[0] == 0
    data = json.loads(out.read_text())
    assert data["fn"] == "gauss2d" and data["stop_level"] == 6


def test_essays(capsys):
    code, out, _ = run(capsys, "essays", "--fn", "disc", "--N", "2000", "--Ness", "10")
    kv = parse_kv(out)
    assert code == 0 and float(kv["variance"]) > 0


def test_essays_const_inf(capsys):
    code, out, _ = run(capsys, "essays", "--fn", "const", "--N", "200", "--Ness", "5",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["efficiency"] == "inf"


def compare_rows(capsys, *argv):
    code, out, _ = run(capsys, "compare", *argv)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    return out, rows


def test_compare_const(capsys):
    out, rows = compare_rows(capsys, "--fn", "const", "--c", "3", "--sweep", "100,1000",
                             "--Ness", "5")
    assert out.splitlines()[0].split(",") == COMPARE_FIELDS
    for r in rows:
        assert float(r["E_MC"]) == 0 and float(r["E_AMC"]) == 0
        assert r["Eff_MC"] == "inf" and r["Eff_AMC"] == "inf"


def test_compare_disc_small(capsys):
    _, rows = compare_rows(capsys, "--fn", "disc", "--sweep", "1000,5000", "--Ness", "30",
                           "--seed", "3")
    assert [int(r["N"]) for r in rows] == [1000, 5000]
    for r in rows:
        assert float(r["V_AMC"]) < float(r["V_MC"])
        for v in r.values():
            assert v == "inf" or math.isfinite(float(v))


def test_compare_deterministic_except_timing(capsys):
    args = ("--fn", "gauss2d", "--alpha", "50", "--sweep", "1000,4000", "--Ness", "8", "--seed", "5")
    _, a = compare_rows(capsys, *args)
    _, b = compare_rows(capsys, *args, "--threads", "4")
    stable = [k for k in COMPARE_FIELDS if not k.startswith(("T_", "Eff_"))]
    assert [[r[k] for k in stable] for r in a] == [[r[k] for k in stable] for r in b]


def test_compare_json(capsys):
    code, out, _ = run(capsys, "compare", "--fn", "disc", "--sweep", "1000", "--Ness", "4",
                       "--format", "json")
    assert code == 0
    assert set(json.loads(out)[0]) == set(COMPARE_FIELDS)


def test_compare_rejects_unsorted_sweep(capsys):
    code, _, err = run(capsys, "compare", "--sweep", "5000,1000", "--Ness", "4")
    assert code == 1 and "increasing" in err


def dump(capsys, *argv):
    code, out, _ = run(capsys, "mesh-dump", *argv)
    assert code == 0
    return json.loads(out)


def test_mesh_dump_roundtrip(capsys):
    data = dump(capsys, "--fn", "disc", "--N", "10000", "--L", "6", "--seed", "1")
    assert data["dim"] == 2 and data["iteration"] == 6
    assert set(data["strata"][0]) == {"lower", "upper", "n", "sigma2_bar", "depth"}
    mesh_from_dict(data).check_partition()


def test_mesh_dump_more_strata_with_more_levels(capsys):
    short = dump(capsys, "--fn", "disc", "--L", "2", "--seed", "4")
    long = dump(capsys, "--fn", "disc", "--L", "6", "--seed", "4")
    assert len(long["strata"]) > len(short["strata"])


@pytest.mark.parametrize("L", ["1", "6"])
def test_mesh_dump_const(capsys, L):
    data = dump(capsys, "--fn", "const", "--L", L, "--N", "500")
    assert len(data["strata"]) == 16


def test_mesh_dump_gauss3d(capsys):
    data = dump(capsys, "--fn", "gauss3d", "--alpha", "50", "--L", "6", "--N", "10000")
    vol = math.fsum(math.prod(u - l for l, u in zip(s["lower"], s["upper"]))
                    for s in data["strata"])
    assert abs(vol - 1.0) <= 1e-12


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["integrate", "--fn", "nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["integrate", "--N", "abc"])
    assert exc.value.code == 2


def test_config_error_exit_1(capsys):
    code, _, err = run(capsys, "integrate", "--N", "10")
    assert code == 1 and "too small" in err


def test_unwritable_output_exit_1(capsys, tmp_path):
    code, _, _ = run(capsys, "compare", "--fn", "const", "--sweep", "100", "--Ness", "2",
                     "--out", str(tmp_path / "missing" / "out.csv"))
    assert code == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "adaptmc", "integrate", "--fn", "const",
                          "--N", "64"], capture_output=True, text=True)
    assert res.returncode == 0 and "estimate: 1" in res.stdout
