import json


from tverrook import build_chessboard, standard_spec
from tverrook.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, json.loads(captured.out), captured.err


def write_json(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def radon_instance():
    return {
        "d": 1,
        "points": [
            {"coords": ["0"], "color": 0, "multiplicity": 1},
            {"coords": ["1"], "color": 1, "multiplicity": 1},
            {"coords": ["1/2"], "color": 2, "multiplicity": 1},
        ],
        "r": 2,
        "mode": "free",
    }


def test_chessboard_check_verified(capsys):
    code, report, err = run(capsys, "chessboard", "check", "--cols", "1,2", "--rows", "4")
    assert code == 0
    assert report["verdict"] == "verified"
    assert report["subcommand"] == "chessboard check"
    assert report["details"]["report"]["ridge_degrees_ok"]
    assert "pseudomanifold" in err


def test_chessboard_check_refuted(capsys):
    code, report, _ = run(capsys, "chessboard", "check", "--cols", "1,1", "--rows", "4")
    assert code == 1
    assert report["verdict"] == "refuted"


def test_chessboard_build_writes_certificate(capsys, tmp_path):
    out = tmp_path / "complex.json"
    code, report, _ = run(
        capsys, "chessboard", "build", "--cols", "1,1", "--rows", "3", "--out", str(out)
    )
    assert code == 0
    assert report["certificate_path"] == str(out)
    data = json.loads(out.read_text())
    K = build_chessboard(standard_spec(2, 3))
    assert data == K.to_json()


def test_orient(capsys):
    code, report, _ = run(capsys, "orient", "--cols", "1,2")
    assert code == 0
    assert report["details"]["boundary_zero"]
    assert report["details"]["facets"] == 12


def test_collapse_degree(capsys):
    code, report, _ = run(capsys, "collapse", "degree", "--caps", "1,2", "--theta", "1,1")
    assert code == 0
    assert report["details"]["degree_formula"] == "3"
    assert report["details"]["degree_by_counting"] == "3"


def test_valuation(capsys):
    code, report, _ = run(capsys, "valuation", "--p", "2", "--m", "8")
    assert code == 0
    assert report["details"]["ord_p_m_factorial"] == 7


def test_obstruction(capsys):
    code, report, err = run(capsys, "obstruction", "--p", "2", "--k", "2", "--d", "1")
    assert code == 0
    assert report["details"]["degree"] == "3"
    assert report["details"]["degree_mod_p"] == 1
    assert len(report["details"]["subgroups"]) == 5
    assert err.count("dim fixed chessboard") == 5


def test_obstruction_guard_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("TVERROOK_OBSTRUCTION_GUARD", "4")
    code, report, _ = run(capsys, "obstruction", "--p", "3", "--k", "2", "--d", "1")
    assert code == 4
    assert report["verdict"] == "error"


def test_homology(capsys, tmp_path):
    K = build_chessboard(standard_spec(3, 4))
    path = write_json(tmp_path, "cx.json", K.to_json())
    code, report, _ = run(capsys, "homology", "--json", path)
    assert code == 0
    assert report["details"]["profile"] == [
        {"q": 0, "betti": 0, "torsion": []},
        {"q": 1, "betti": 2, "torsion": []},
        {"q": 2, "betti": 1, "torsion": []},
    ]


def test_connectivity_exit_codes(capsys, tmp_path):
    K = build_chessboard(standard_spec(2, 3))
    path = write_json(tmp_path, "cx.json", K.to_json())
    code, _, _ = run(capsys, "connectivity", "--json", path, "--level", "0")
    assert code == 0
    code, report, _ = run(capsys, "connectivity", "--json", path, "--level", "1")
    assert code == 1
    assert report["verdict"] == "refuted"


def test_fixed_points(capsys, tmp_path):
    payload = {
        "spec": {"m": 2, "n": 4, "row_caps": [1, 1, 1, 1], "col_caps": [1, 2]},
        "generators": [[2, 1, 4, 3]],
    }
    path = write_json(tmp_path, "fp.json", payload)
    code, report, _ = run(capsys, "fixed-points", "--json", path)
    assert code == 0
    assert report["details"]["order"] == 2
    assert report["details"]["dimension"] == 0


def test_tverberg_search_found(capsys, tmp_path):
    path = write_json(tmp_path, "inst.json", radon_instance())
    code, report, _ = run(capsys, "tverberg", "search", "--json", path)
    assert code == 0
    assert report["verdict"] == "found"
    assert report["certificate"]["witness"] == ["1/2"]


def test_tverberg_search_exhausted_free_mode(capsys, tmp_path):
    data = radon_instance()
    data["points"] = data["points"][:2]
    path = write_json(tmp_path, "inst.json", data)
    code, report, _ = run(capsys, "tverberg", "search", "--json", path)
    assert code == 2
    assert report["verdict"] == "exhausted"


def test_malformed_rational_is_input_error(capsys, tmp_path):
    data = radon_instance()
    data["points"][0]["coords"] = ["1/0"]
    path = write_json(tmp_path, "inst.json", data)
    code, report, _ = run(capsys, "tverberg", "search", "--json", path)
    assert code == 3
    assert report["verdict"] == "error"


def test_missing_file_is_input_error(capsys):
    code, report, _ = run(capsys, "tverberg", "search", "--json", "/no/such/file.json")
    assert code == 3


def test_unknown_flag_is_input_error(capsys):
    assert main(["valuation", "--p", "2", "--m", "8", "--bogus"]) == 3


def test_balanced_search(capsys, tmp_path):
    data = {
        "d": 2,
        "points": [
            {"coords": ["0", "0"], "color": 0, "multiplicity": 1},
            {"coords": ["2", "0"], "color": 1, "multiplicity": 1},
            {"coords": ["2", "2"], "color": 2, "multiplicity": 1},
            {"coords": ["0", "2"], "color": 3, "multiplicity": 1},
            {"coords": ["1", "1"], "color": 4, "multiplicity": 1},
        ],
        "r": 2,
    }
    path = write_json(tmp_path, "bal.json", data)
    code, report, _ = run(capsys, "balanced", "search", "--json", path)
    assert code == 0
    assert report["certificate"]["witness"] == ["1", "1"]
    assert report["details"]["policy"] == "shifted-k-plus-1"


def test_lift_roundtrip(capsys, tmp_path):
    inst = {
        "d": 1,
        "points": [
            {"coords": ["0"], "color": 0, "multiplicity": 1},
            {"coords": ["1/10"], "color": 0, "multiplicity": 2},
            {"coords": ["1"], "color": 1, "multiplicity": 1},
            {"coords": ["9/10"], "color": 1, "multiplicity": 2},
            {"coords": ["1/2"], "color": 2, "multiplicity": 1},
        ],
        "r": 4,
        "mode": "prime-power-1.3",
    }
    path = write_json(tmp_path, "inst.json", inst)
    code, report, _ = run(capsys, "tverberg", "search", "--json", path)
    assert code == 0
    lift_input = {"config": inst, "solution": report["certificate"], "r": 4}
    path = write_json(tmp_path, "lift.json", lift_input)
    code, report, _ = run(capsys, "lift", "--json", path)
    assert code == 0
    faces = report["certificate"]["solution"]["faces"]
    used = [v for f in faces for v in f]
    assert len(used) == len(set(used))


def test_example_a(capsys):
    code, report, _ = run(capsys, "example-a", "--p", "2", "--k", "2", "--d", "2")
    assert code == 0
    assert report["details"]["witness"] == ["1", "1"]


def test_unavoidable_check(capsys, tmp_path):
    payload = {
        "multiset": {"vertices": [0, 1, 2], "multiplicity": {"0": 1, "1": 1, "2": 1}},
        "r": 2,
        "avoid_set": [0],
    }
    path = write_json(tmp_path, "un.json", payload)
    code, report, _ = run(capsys, "unavoidable", "check", "--json", path)
    assert code == 0
    assert report["details"]["unavoidable"]
    payload["avoid_set"] = [0, 1]
    path = write_json(tmp_path, "un2.json", payload)
    code, report, _ = run(capsys, "unavoidable", "check", "--json", path)
    assert code == 1
    assert report["details"]["counterexample"] == [[0], [1]]


def test_constrain(capsys, tmp_path):
    payload = {
        "complex": {"universe": [0, 1, 2, 3], "facets": [[0, 1, 2], [2, 3]]},
        "avoid_sets": [[1]],
    }
    path = write_json(tmp_path, "con.json", payload)
    code, report, _ = run(capsys, "constrain", "--json", path)
    assert code == 0
    assert report["certificate"]["facets"] == [[0, 2], [2, 3]]


def test_reports_are_deterministic(capsys, tmp_path):
    path = write_json(tmp_path, "inst.json", radon_instance())
    reports = []
    for _ in range(2):
        _, report, _ = run(capsys, "tverberg", "search", "--json", path)
        report.pop("elapsed_seconds")
        reports.append(json.dumps(report, sort_keys=True))
    assert reports[0] == reports[1]


def test_seed_is_reported(capsys, tmp_path):
    path = write_json(tmp_path, "inst.json", radon_instance())
    _, report, _ = run(capsys, "--seed", "9", "tverberg", "search", "--json", path)
    assert report["seed"] == 9


def test_invalid_workers(capsys):
    code = main(["--workers", "0", "valuation", "--p", "2", "--m", "4"])
    assert code == 3
