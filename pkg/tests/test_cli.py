import io
from fractions import Fraction

import pytest

from qkm.cli import (
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_RESOURCE,
    EXIT_USAGE,
    SessionConfig,
    UsageError,
    emit_config,
    parse_config,
    run,
)


def invoke(argv):
    out = io.StringIO()
    err = io.StringIO()
    code = run(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def write_config(tmp_path, text, name="session.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


SL3_CFG = "matrix = 2 -1; -1 2\nmax_degree = 3\n"
AFF_CFG = "matrix = 2 -2; -2 2\nmax_degree = 3\n"
BAD_CFG = "matrix = 2 -1; 0 2\n"
RAT_CFG = "matrix = 2 -1/2; -1/2 2\nmax_degree = 2\n"


def test_parse_defaults_and_examples():
    cfg = parse_config(SL3_CFG)
    assert cfg.matrix == ((2, -1), (-1, 2))
    assert cfg.degree_cap == 3
    assert cfg.d is None
    cfg2 = parse_config(RAT_CFG)
    assert cfg2.matrix[0][1] == Fraction(-1, 2)


def test_parse_errors_carry_position():
    with pytest.raises(UsageError, match="line 2"):
        parse_config("matrix = 2 -1; -1 2\nmax_degree == 3\n")
    with pytest.raises(UsageError, match="line 1.*rational"):
        parse_config("matrix = 2 x; -1 2\n")
    with pytest.raises(UsageError, match="unknown key"):
        parse_config("matrix = 2\nfoo = 1\n")
    with pytest.raises(UsageError, match="square"):
        parse_config("matrix = 2 -1; -1\n")


def test_config_round_trip():
    cfg = SessionConfig(
        matrix=((Fraction(2), Fraction(-1, 2)), (Fraction(-1, 2), Fraction(2))),
        d=(Fraction(1), Fraction(1)),
        degree_cap=5, depth=3,
        weights=((Fraction(1), Fraction(0)),),
        hbar=complex(0.1, 0.2), tol=1e-10, deviation_tol=1e-5,
        wordlen=3, strands=4)
    assert parse_config(emit_config(cfg)) == cfg
    plain = SessionConfig(matrix=((Fraction(2),),))
    assert parse_config(emit_config(plain)) == plain


def test_symmetrize_command(tmp_path):
    path = write_config(tmp_path, "matrix = 2 -2; -1 2\n")
    code, out, _ = invoke(["symmetrize", "--config", path])
    assert code == EXIT_PASS
    assert "1\t1" in out and "2\t2" in out

    bad = write_config(tmp_path, BAD_CFG, "bad.cfg")
    code, out, err = invoke(["symmetrize", "--config", bad])
    assert code == EXIT_FAIL
    assert "(1, 2)" in err


def test_relations_command(tmp_path):
    path = write_config(tmp_path, SL3_CFG)
    code, out, _ = invoke(["relations", "--config", path])
    assert code == EXIT_PASS
    assert "# D\t1" in out
    line = next(l for l in out.splitlines() if l.startswith("2,1\t"))
    fields = line.split("\t")
    assert fields[1] == "3" and fields[2] == "1" and fields[3] == "2"
    assert "112" in fields[4]


def test_relations_rational_matrix(tmp_path):
    path = write_config(tmp_path, RAT_CFG)
    code, out, _ = invoke(["relations", "--config", path])
    assert code == EXIT_PASS
    assert "# D\t2" in out


def test_dims_command_affine(tmp_path):
    path = write_config(tmp_path, "matrix = 2 -2; -2 2\nmax_degree = 4\n")
    code, out, _ = invoke(["dims", "--config", path])
    assert code == EXIT_PASS
    assert "verdict\tweyl_kac_denominator\tpass" in out
    mult_lines = out.split("# table\troot_multiplicities")[1]
    assert "1,1\t1" in mult_lines
    assert "2,1\t1" in mult_lines
    assert "2,2\t1" in mult_lines
    assert "2,0\t0" in mult_lines


def test_character_command(tmp_path):
    path = write_config(tmp_path, "matrix = 2\ndepth = 5\nhw = 3\n")
    code, out, _ = invoke(["character", "--config", path])
    assert code == EXIT_PASS
    rows = [l for l in out.splitlines() if l and l[0].isdigit()]
    assert rows[:5] == ["0\t1", "1\t1", "2\t1", "3\t1", "4\t0"]
    code, out, _ = invoke(["character", "--config", path, "--verma"])
    rows = [l for l in out.splitlines() if l and l[0].isdigit()]
    assert rows[:5] == ["0\t1", "1\t1", "2\t1", "3\t1", "4\t1"]


def test_compare_characters_command(tmp_path):
    path = write_config(tmp_path,
                        "matrix = 2 -1; -1 2\ndepth = 4\nhw = 1 1\n")
    code, out, _ = invoke(["compare-characters", "--config", path])
    assert code == EXIT_PASS
    assert "verdict\tcharacters_equal\tpass" in out


def test_ybe_command(tmp_path):
    path = write_config(tmp_path, "matrix = 2\ndepth = 2\nhw = 1\n")
    code, out, _ = invoke(["ybe", "--config", path])
    assert code == EXIT_PASS
    assert "verdict\tbraid_relation\tpass" in out
    assert any(l.startswith("1\t3\tpass") for l in out.splitlines())


def test_dk_command(tmp_path):
    path = write_config(
        tmp_path,
        "matrix = 2\ndepth = 2\nhw = 1\nhbar = 0.1\ntol = 1e-8\n"
        "wordlen = 3\nstrands = 2\n")
    code, out, _ = invoke(["dk", "--config", path])
    assert code == EXIT_PASS
    assert "verdict\tmonodromy_match\tpass" in out


def test_exact_commands_are_deterministic(tmp_path):
    path = write_config(tmp_path, AFF_CFG)
    outputs = set()
    for _ in range(2):
        code, out, _ = invoke(["relations", "--config", path])
        assert code == EXIT_PASS
        outputs.add(out)
    assert len(outputs) == 1
    outputs = set()
    for _ in range(2):
        code, out, _ = invoke(["dims", "--config", path])
        outputs.add(out)
    assert len(outputs) == 1


def test_usage_errors(tmp_path):
    code, _, err = invoke(["relations"])
    assert code == EXIT_USAGE and "config" in err
    code, _, _ = invoke(["character", "--config",
                         write_config(tmp_path, "matrix = 2\n")])
    assert code == EXIT_USAGE  # no highest weight
    code, _, _ = invoke(["nonsense"])
    assert code == EXIT_USAGE


def test_resource_exit(tmp_path):
    path = write_config(tmp_path, "matrix = 2 -1; -1 2\nmax_degree = 18\n")
    code, _, err = invoke(["relations", "--config", path])
    assert code == EXIT_RESOURCE
    assert "resource" in err.lower()


def test_weight_dimension_mismatch(tmp_path):
    path = write_config(tmp_path,
                        "matrix = 2 -2; -2 2\ndepth = 2\nhw = 1 0 0 0\n")
    code, _, err = invoke(["character", "--config", path])
    assert code == EXIT_USAGE
    assert "coordinates" in err
