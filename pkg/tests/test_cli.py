import json

import pytest

from umbral_flow.cli import main, make_map, parse_element, parse_poly
from umbral_flow.config import Config
from umbral_flow.errors import ParseError
from umbral_flow.fq import FqElem, PolyA, field


def test_parse_poly_basic(F2):
    t = PolyA.t(F2)
    assert parse_poly(F2, "t^2+t") == t * t + t
    assert parse_poly(F2, "0").is_zero()
    assert parse_poly(F2, "2t").is_zero()  # 2 = 0 in F_2
    assert parse_poly(F2, "t^3+t+1") == t ** 3 + t + PolyA.one(F2)


def test_parse_poly_coefficients(F3):
    t = PolyA.t(F3)
    got = parse_poly(F3, "2*t^2+t+2")
    assert got == t * t + t * t + t + PolyA.from_coeffs(F3, [2])
    # minus signs reduce mod p
    assert parse_poly(F3, "t-1") == t + PolyA.from_coeffs(F3, [2])


def test_parse_poly_extension_field(F4):
    u = FqElem.from_coeffs(F4, (0, 1))
    got = parse_poly(F4, "(u+1)*t^2+u")
    expect = PolyA.from_coeffs(F4, [u, FqElem(F4, 0), u + FqElem(F4, 1)])
    assert got == expect
    got2 = parse_poly(F4, "u^2*t")
    assert got2.coeff(1) == u * u


def test_parse_errors(F2):
    with pytest.raises(ParseError):
        parse_poly(F2, "")
    with pytest.raises(ParseError):
        parse_poly(F2, "t^x")
    with pytest.raises(ParseError):
        parse_poly(F2, "w+1")
    with pytest.raises(ParseError):
        parse_poly(F2, "(t+1")
    err = None
    try:
        parse_poly(F2, "u*t")
    except ParseError as e:
        err = e
    assert err is not None and err.position is not None


def test_parse_element_json_file(tmp_path, F2):
    from umbral_flow.laurent import LaurentF
    x = LaurentF.from_codes(F2, -1, [1, 0, 1], prec=9)
    path = tmp_path / "x.json"
    path.write_text(json.dumps(x.to_json()))
    got = parse_element(F2, "@" + str(path))
    assert got == x


def test_make_map_specs(cc2):
    cfg = Config(trials=2)
    assert make_map("additive", cc2, cfg).name == "additive"
    assert make_map("twisted", cc2, cfg).name == "twisted"
    assert make_map("geometric:identity", cc2, cfg).name == "geometric:identity"
    assert make_map("geometric:poly:t^2", cc2, cfg).name == "geometric:poly"
    with pytest.raises(ParseError):
        make_map("bogus", cc2, cfg)


def test_cli_field_info(capsys):
    rc = main(["--p", "3", "field-info"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["p"] == 3 and out["q"] == 3


def test_cli_carlitz_dk(capsys):
    rc = main(["carlitz", "dk", "--k", "1"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["coeffs"] == [[0], [1], [1]]  # t^2 + t


def test_cli_carlitz_exp_domain_error(capsys):
    rc = main(["carlitz", "exp", "--x", "t"])
    assert rc == 2


def test_cli_flow_apply_matches_shift(capsys, tmp_path, cc2):
    from umbral_flow.laurent import LaurentF
    from umbral_flow.series import TruncSeries, taylor_shift

    P = TruncSeries.monomial(cc2.field, 3, 8)
    series_path = tmp_path / "p.json"
    series_path.write_text(json.dumps(P.to_json()))
    rc = main(["--trunc", "8", "flow", "apply", "--map", "additive",
               "--x", "t^2+t", "--series", str(series_path)])
    assert rc == 2  # t^2+t is not admissible for the additive map


def test_cli_flow_apply_admissible(capsys, tmp_path, cc2):
    from umbral_flow.laurent import LaurentF
    from umbral_flow.series import TruncSeries, taylor_shift

    P = TruncSeries.monomial(cc2.field, 3, 8)
    series_path = tmp_path / "p.json"
    series_path.write_text(json.dumps(P.to_json()))
    x_path = tmp_path / "x.json"
    x = LaurentF.from_codes(cc2.field, 1, [1, 1], prec=32)
    x_path.write_text(json.dumps(x.to_json()))
    rc = main(["--trunc", "8", "flow", "apply", "--map", "twisted",
               "--x", "@" + str(x_path), "--series", str(series_path)])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["trunc"] == 8


def test_cli_verify_unknown_claim(capsys):
    assert main(["verify", "nope"]) == 2


def test_cli_verify_runs_and_reports(capsys):
    rc = main(["--trials", "8", "--prec", "32", "--trunc", "8", "--basis", "6",
               "verify", "taylor"])
    captured = capsys.readouterr()
    assert rc == 0
    report = json.loads(captured.out)
    assert report["passed"] is True
    assert report["claims"][0]["claim"] == "taylor"
    assert "pass" in captured.err


def test_cli_verify_deterministic_bytes(capsys):
    args = ["--trials", "6", "--prec", "24", "--trunc", "8", "--basis", "6",
            "--seed", "5", "verify", "example58"]
    outs = []
    for _ in range(2):
        rc = main(args)
        assert rc == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_cli_flow_apply_dual_map(capsys, tmp_path, cc2):
    from umbral_flow.verify import ex58_series

    H = ex58_series(cc2, 3, 64)
    hpath = tmp_path / "h.json"
    hpath.write_text(json.dumps(H.to_json()))
    rc = main(["--trunc", "8", "flow", "apply",
               "--map", f"dual:twisted:{hpath}", "--x", "t"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["trunc"] == 8


def test_enum_cap_env(monkeypatch):
    monkeypatch.setenv("UMBRAL_FLOW_CAP", "4")
    cfg = Config(trials=2)
    assert cfg.cap == 4
