"""Command-line interface: outputs, formats, exit codes, determinism."""

import json

from subword_fans.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, out


def test_counting_matrix_printed(capsys):
    rc, out = run(capsys, "counting-matrix", "--rank", "2", "--c", "12",
                  "--m", "3", "--format", "printed")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "( 1  0  1  0  1  0 )"
    assert lines[1] == "( 3  1  2  2  1  3 )"
    assert lines[2] == "( 0  1  0  1  0  1 )"


def test_counting_matrix_json_round_trip(capsys):
    rc, out = run(capsys, "counting-matrix", "--rank", "3", "--c", "213",
                  "--m", "4", "--format", "json")
    assert rc == 0
    from subword_fans.linalg import QMatrix
    from subword_fans.counting import counting_matrix
    assert QMatrix.from_json(out) == counting_matrix(3, (2, 1, 3), 4)


def test_fvector_multiassoc(capsys):
    rc, out = run(capsys, "fvector", "--rank", "3", "--c", "213",
                  "--word", "multiassoc:k=3", "--format", "csv")
    assert rc == 0
    assert out.strip() == "1,15,105,455,1320,2607,3465,2970,1485,330"


def test_fvector_obs(capsys):
    rc, out = run(capsys, "fvector", "--rank", "3", "--word", "obs")
    assert rc == 0
    assert out.strip() == "1,9,30,42,21"


def test_facets_polymake(capsys):
    rc, out = run(capsys, "facets", "--rank", "2", "--c", "12",
                  "--word", "cm:3", "--format", "printed")
    assert rc == 0
    lines = out.strip().splitlines()
    assert len(lines) == 8 and all(l.startswith("{") for l in lines)


def test_gale_orthogonal(capsys):
    rc, out = run(capsys, "gale", "--rank", "2", "--c", "12", "--m", "4",
                  "--word", "letters:12211", "--embedding", "first",
                  "--format", "json")
    assert rc == 0
    from subword_fans.linalg import QMatrix
    M = QMatrix.from_json(out)
    assert M.shape == (2, 5)


def test_signature_exit_codes(capsys):
    rc, out = run(capsys, "signature", "--rank", "2", "--c", "12",
                  "--word", "cm:4", "--format", "csv")
    assert rc == 0
    good, bad, zero, total = map(int, out.strip().split(","))
    assert bad == 0 and zero == 0 and good == total
    # the rank-4 matrix with k=2 has one vanishing determinant: exit 2
    rc, out = run(capsys, "a4-table", "--k", "2")
    assert out.strip() == "593,0,1,594"


def test_a4_table_row(capsys):
    rc, out = run(capsys, "a4-table", "--k", "1")
    assert rc == 0
    assert out.strip() == "42,0,0,42"


def test_signature_params(capsys):
    rc, out = run(capsys, "signature", "--rank", "3", "--c", "123",
                  "--word", "cm:3", "--params", "2,0,1;2,0,3;2,1,0",
                  "--format", "json")
    data = json.loads(out)
    assert data["linear_inequalities_ok"] is False
    assert data["bad"] == 0


def test_build_fan_printed_matches_paper(capsys):
    rc, out = run(capsys, "build-fan", "--family", "M_213", "--m", "3",
                  "--format", "printed")
    assert rc == 0
    assert out.splitlines()[0] == "( -1   0   0   4   2   2  -3  -2  -2 )"


def test_check_fan_complete(capsys):
    rc, out = run(capsys, "check-fan", "--family", "M_213", "--m", "3",
                  "--covering-points", "3", "--seed", "11")
    assert rc == 0
    data = json.loads(out)
    assert data["complete"] is True
    assert data["covering_numbers"] == [1]


def test_check_fan_word_route(capsys):
    rc, out = run(capsys, "check-fan", "--rank", "2", "--c", "12",
                  "--word", "multiassoc:k=1", "--m", "3")
    assert rc == 0
    assert json.loads(out)["complete"] is True


def test_check_regular_exit_codes(capsys):
    rc, out = run(capsys, "check-regular", "--rank", "2", "--c", "12",
                  "--word", "multiassoc:k=1", "--m", "3")
    assert rc == 0
    assert json.loads(out)["verdict"] == "regular"
    rc, out = run(capsys, "check-regular", "--family", "M_213", "--m", "5")
    assert rc == 2
    data = json.loads(out)
    assert data["verdict"] == "non_regular" and data["farkas"]


def test_fold_b2(capsys):
    rc, out = run(capsys, "fold-b2", "--m", "3", "--format", "csv")
    assert rc == 0
    assert out.strip().splitlines()[0] == "-1,0,4,4,-3,-4"


def test_braid_graph_contract_exit_code(capsys):
    rc, out = run(capsys, "braid-graph", "--rank", "4", "--c", "1234",
                  "--word", "letters:1214", "--contract", "14")
    assert rc == 2
    data = json.loads(out)
    assert data["bipartite"] is False and data["stabled"] is False
    assert len(data["odd_cycle"]) == 3
    rc, out = run(capsys, "braid-graph", "--rank", "3", "--word", "letters:121321",
                  "--contract", "12,23")
    assert rc == 0
    assert json.loads(out)["bipartite"] is True


def test_braid_graph_dot(capsys):
    rc, out = run(capsys, "braid-graph", "--rank", "2", "--word", "letters:121",
                  "--dot")
    assert rc == 0 and out.startswith("graph braid {")


def test_determinism_same_seed(capsys):
    args = ("check-fan", "--family", "M_12_A2", "--m", "3",
            "--covering-points", "4", "--seed", "9")
    rc1, out1 = run(capsys, *args)
    rc2, out2 = run(capsys, *args)
    assert rc1 == rc2 == 0 and out1 == out2


def test_input_errors(capsys):
    assert main(["counting-matrix", "--rank", "2", "--c", "99", "--m", "3"]) == 1
    assert main(["fvector", "--rank", "2", "--c", "12", "--word", "junk:3"]) == 1
    assert main(["check-fan", "--rank", "2"]) == 1


def test_survey_cli(tmp_path, capsys):
    out_csv = tmp_path / "rows.csv"
    fig = tmp_path / "tally.png"
    rc, out = run(capsys, "survey", "--rank", "2", "--k", "1", "--c", "12",
                  "--m-max", "4", "--limit", "3",
                  "--out", str(out_csv), "--figure", str(fig))
    assert rc == 0
    data = json.loads(out)
    assert data["rows"] == 3 and data["regular"] == 3
    assert out_csv.exists() and fig.exists() and fig.stat().st_size > 0
    header = out_csv.read_text().splitlines()[0]
    assert header == "word,m,embedding,complete,regular,wall_count,runtime_ms"


def test_figures_written(tmp_path, capsys):
    fig = tmp_path / "fv.png"
    rc, _ = run(capsys, "fvector", "--rank", "2", "--c", "12", "--word", "cm:3",
                "--figure", str(fig))
    assert rc == 0 and fig.exists() and fig.stat().st_size > 0
    fig2 = tmp_path / "graph.png"
    rc, _ = run(capsys, "braid-graph", "--rank", "3", "--figure", str(fig2))
    assert rc == 0 and fig2.exists() and fig2.stat().st_size > 0


def test_out_file(tmp_path, capsys):
    target = tmp_path / "matrix.json"
    rc, out = run(capsys, "counting-matrix", "--rank", "2", "--c", "12",
                  "--m", "3", "--format", "json", "--out", str(target))
    assert rc == 0 and out == ""
    assert json.loads(target.read_text())["rows"] == 3
