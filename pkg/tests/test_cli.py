import pytest

import phylotope.verify
from phylotope.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_polytope_stdout_and_determinism(capsys):
    code, out, err = run(capsys, "polytope", "--group", "Z2",
                         "--tree", "(a,b,c);")
    assert code == 0
    assert err == ""
    lines = out.splitlines()
    assert lines[0] == "# group=Z2 tree=(a,b,c); flavor=abelian dim=6 count=4"
    assert len(lines) == 5
    code2, out2, _ = run(capsys, "polytope", "--group", "Z2",
                         "--tree", "(a,b,c);")
    assert (code2, out2) == (code, out)


def test_polytope_out_file(tmp_path, capsys):
    target = tmp_path / "verts.txt"
    code, out, _ = run(capsys, "polytope", "--group", "K3P",
                       "--tree", "(a,b,c);", "--out", str(target))
    assert code == 0
    assert out == ""
    text = target.read_text()
    assert text.startswith("# group=K3P tree=(a,b,c); "
                           "flavor=abelian dim=12 count=16\n")
    assert len(text.splitlines()) == 17


def test_project_matches_projected_flavor(capsys):
    _, direct, _ = run(capsys, "project", "--group", "K2P",
                       "--tree", "(a,b,c);")
    _, flavored, _ = run(capsys, "polytope", "--group", "K2P",
                         "--tree", "(a,b,c);", "--flavor", "projected")
    assert direct == flavored
    assert "count=10" in direct.splitlines()[0]


def test_projected_flavor_rejected_for_abelian(capsys):
    code, _, err = run(capsys, "polytope", "--group", "Z3",
                       "--tree", "(a,b,c);", "--flavor", "projected")
    assert code == 2
    assert "error:" in err


def test_bad_newick_is_input_error(capsys):
    code, _, err = run(capsys, "polytope", "--group", "Z2",
                       "--tree", "(a,b,c")
    assert code == 2
    assert "error:" in err


def test_unknown_group_is_input_error(capsys):
    code, _, err = run(capsys, "polytope", "--group", "Q8",
                       "--tree", "(a,b,c);")
    assert code == 2
    assert "error:" in err


def test_group_and_group_file_conflict(tmp_path, capsys):
    gf = tmp_path / "g.txt"
    gf.write_text("states: 0 1\norders: 2\nh: (1,2)\n")
    code, _, err = run(capsys, "polytope", "--group", "Z2",
                       "--group-file", str(gf), "--tree", "(a,b,c);")
    assert code == 2
    code, out, _ = run(capsys, "polytope", "--group-file", str(gf),
                       "--tree", "(a,b,c);")
    assert code == 0
    assert "count=4" in out.splitlines()[0]


def test_vertex_cap_exit(capsys):
    code, _, err = run(capsys, "polytope", "--group", "Z3",
                       "--tree", "((a,b),(c,d));", "--vertex-cap", "5")
    assert code == 3
    assert "resource cap:" in err


def test_normality_exit_codes(capsys):
    code, out, _ = run(capsys, "normality", "--group", "Z2",
                       "--tree", "(a,b,c);")
    assert code == 0
    assert "verdict: Normal" in out
    code, out, _ = run(capsys, "normality", "--group", "K2P",
                       "--tree", "(a,b,c);", "--flavor", "projected")
    assert code == 1
    assert "verdict: NotNormal" in out
    assert "witness degree: 2" in out


def test_glue_emits_glued_polytope(capsys):
    code, out, _ = run(capsys, "glue", "--group", "Z2",
                       "--tree", "(a,b,c);",
                       "--tree", "(p,q,r);", "c", "p")
    assert code == 0
    head = out.splitlines()[0]
    assert "flavor=abelian" in head
    assert "count=8" in head
    # glued quartet has five edges and a two-state group: dim 10
    assert "dim=10" in head


def test_glue_needs_exactly_two_trees(capsys):
    code, _, err = run(capsys, "glue", "--group", "Z2",
                       "--tree", "(a,b,c);", "c", "p")
    assert code == 2


def test_oracle_test_agreement(capsys):
    code, out, _ = run(capsys, "oracle-test", "--group", "Z3",
                       "--tree", "(a,b,c);", "--seed", "5")
    assert code == 0
    assert "draws: 5" in out
    assert "agreement: exact" in out
    assert "derived scalar matches: yes" in out


def test_oracle_test_limits(capsys):
    code, _, err = run(capsys, "oracle-test", "--group", "Z2",
                       "--tree", "(a,b,(c,(d,(e,f))));")
    assert code == 2
    code, _, err = run(capsys, "oracle-test", "--group", "Z6",
                       "--tree", "(a,b,c);")
    assert code == 2
    code, _, err = run(capsys, "oracle-test", "--group", "JC",
                       "--tree", "(a,b,c);")
    assert code == 2


def test_dim_what(capsys):
    code, out, _ = run(capsys, "dim-what", "--group", "K2P")
    assert code == 0
    assert out.strip().endswith("3")


def test_appendix_demo(capsys):
    code, out, _ = run(capsys, "appendix-demo")
    assert code == 0
    assert "relation (1+i)*x1 - 2i*x2 + (i-1)*x3 = 0: verified" in out
    assert "image rank: 3" in out
    assert "coordinate equalities cut out the image: no" in out


def test_verify_paper_only_filter(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only",
                       "model-dimensions,counting-laws")
    assert code == 0
    lines = [l for l in out.splitlines() if l]
    assert any(l.startswith("PASS model-dimensions") for l in lines)
    assert any(l.startswith("PASS counting-laws") for l in lines)
    assert "2 of 2 checks passed" in lines[-1]


def test_verify_paper_unknown_name(capsys):
    code, _, err = run(capsys, "verify-paper", "--only", "no-such-check")
    assert code == 2


def test_verify_paper_detects_corruption(capsys, monkeypatch):
    real = phylotope.verify.load_golden

    def corrupt(name):
        text = real(name)
        head, first, *rest = text.splitlines()
        return "\n".join([head, first.replace("0", "7", 1)] + rest) + "\n"

    monkeypatch.setattr(phylotope.verify, "load_golden", corrupt)
    code, out, _ = run(capsys, "verify-paper", "--only",
                       "three-parameter-claw-vertices")
    assert code == 1
    assert "FAIL three-parameter-claw-vertices" in out
