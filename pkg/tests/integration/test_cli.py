import json

import pytest

from app.main import main

THM1 = ["--thm1", "--group", "C2^2", "--q", "3"]


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_construct(capsys):
    code, report = _run(capsys, ["construct", *THM1])
    assert code == 0
    assert report["report_schema"] == "report_v1"
    assert report["nu_p"] == 27
    assert report["p_elements"] == 28
    assert report["frobenius_multiplier"] == 7
    assert report["redundant"] is True
    assert report["instance"]["g_order"] == 108


def test_verify(capsys):
    """Полная проверка thm1(C2^2, 3): без находок, точное покрытие из 9 подгрупп"""
    code, report = _run(capsys, ["verify", *THM1])
    assert code == 0
    assert report["findings"] == []
    sizes = {c["method"]: c["size"] for c in report["covers"]}
    assert sizes["exact"] == 9
    assert sizes["common_transversal"] <= 18
    assert sizes["transversal"] <= 27
    assert report["casolo_verified"] is True
    assert report["union_ratios"][0]["ratio"] == "1/7"
    assert report["restricted_cover_size"] >= 3
    assert report["oracles"]["p_elements_agree"] is True


def test_verify_greedy_method(capsys):
    code, report = _run(capsys, ["verify", *THM1, "--method", "greedy"])
    assert code == 0
    assert [c["method"] for c in report["covers"]] == ["greedy"]


def test_cover_pair(capsys):
    code, report = _run(capsys, ["cover", *THM1, "--pair", "1"])
    assert code == 0
    assert len(report["common_transversal"]) == 9
    assert all(b["satisfied"] for b in report["bounds"])


def test_cover_representatives(capsys):
    code, report = _run(capsys, ["cover", *THM1, "--method", "exact"])
    assert code == 0
    cover = report["covers"][0]
    assert cover["size"] == 9
    assert len(cover["representatives"]) == 9


def test_casolo(capsys):
    code, report = _run(capsys, ["casolo", *THM1])
    assert code == 0
    assert report["casolo_verified"] is True


def test_gheri(capsys):
    code, report = _run(capsys, ["gheri", *THM1])
    assert code == 0
    assert report["gheri"] == {"lhs": 729, "rhs": 729, "satisfied": True, "equality": True}


def test_thm2(capsys):
    code, report = _run(capsys, ["construct", "--thm2", "--group", "Q8"])
    assert code == 0
    assert report["instance"]["q"] == 3
    assert report["nu_p"] == 27


def test_table(capsys):
    code, report = _run(capsys, ["table", "--pmax", "29"])
    assert code == 0
    assert [row["q"] for row in report["rows"]] == [3, 4, 11, 8, 23, 27, 103, 191, 47, 59]


@pytest.mark.parametrize("pmax", ["1", "200"])
def test_table_pmax_range(capsys, pmax):
    code, report = _run(capsys, ["table", "--pmax", pmax])
    assert code == 1
    assert report["error"] == "UsageError"


def test_missing_q(capsys):
    code, report = _run(capsys, ["construct", "--thm1", "--group", "C2^2"])
    assert code == 1
    assert report["error"] == "ConfigError"


def test_unknown_command(capsys):
    code, report = _run(capsys, ["frobnicate"])
    assert code == 1
    assert report["error"] == "UsageError"


@pytest.mark.parametrize(
    "argv,error",
    [
        (["construct", "--thm1", "--group", "C4", "--q", "3"], "CyclicGroup"),
        (["construct", "--thm1", "--group", "C2^2", "--q", "2"], "SamePrime"),
        (["construct", "--thm1", "--group", "C2^2", "--q", "9"], "NotPrime"),
        (["construct", "--thm1", "--group", "Foo", "--q", "3"], "UnknownGroup"),
    ],
)
def test_invalid_instances(capsys, argv, error):
    code, report = _run(capsys, argv)
    assert code == 1
    assert report["error"] == error


def test_ceiling_exceeded(capsys):
    code, report = _run(capsys, ["construct", *THM1, "--ceiling", "10"])
    assert code == 3
    assert report["error"] == "TooLargeToEnumerate"


def test_group_file(capsys, tmp_path):
    from app.services.pgroup import catalog

    path = tmp_path / "v4.json"
    path.write_text(json.dumps({"p": 2, "order": 4, "table": catalog("C2^2").table.tolist(), "name": "V4"}))
    code, report = _run(capsys, ["construct", "--thm1", "--group-file", str(path), "--q", "3"])
    assert code == 0
    assert report["instance"]["group"] == "V4"
    assert report["nu_p"] == 27


def test_text_format(capsys):
    code = main(["construct", *THM1, "--format", "text"])
    out = capsys.readouterr().out
    assert code == 0
    assert "nu_p: 27" in out


def test_output_files(capsys, tmp_path):
    report_path = tmp_path / "report.json"
    metrics_path = tmp_path / "metrics.prom"
    code = main(["gheri", *THM1, "--out", str(report_path), "--metrics-out", str(metrics_path)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(report_path.read_text())["nu_p"] == 27
    assert "instances_processed_total" in metrics_path.read_text()


def test_scan(capsys):
    code, report = _run(capsys, ["scan", "--thm1", "--groups", "C2^2", "C4", "--qs", "3", "5"])
    assert code == 0
    statuses = [(e["group"], e["q"], e["status"]) for e in report["entries"]]
    assert statuses == [
        ("C2^2", 3, "completed"),
        ("C2^2", 5, "completed"),
        ("C4", 3, "failed"),
        ("C4", 5, "failed"),
    ]
    assert report["entries"][2]["error"].startswith("CyclicGroup")
    assert report["minima"] == [{"p": 2, "nu_p": 27, "group": "C2^2", "q": 3}]


def test_verify_is_deterministic(capsys):
    """Повторный запуск с теми же аргументами дает побайтно тот же отчет"""
    outputs = []
    for _ in range(2):
        assert main(["verify", *THM1]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


def test_scan_workers_agree(capsys):
    """Записи scan не зависят от числа процессов"""
    argv = ["scan", "--thm1", "--groups", "C2^2", "C4", "--qs", "3", "5"]
    code, single = _run(capsys, [*argv, "--workers", "1"])
    assert code == 0
    code, parallel = _run(capsys, [*argv, "--workers", "2"])
    assert code == 0
    assert parallel["entries"] == single["entries"]
    assert parallel["minima"] == single["minima"]


def test_scan_thm2(capsys):
    code, report = _run(capsys, ["scan", "--thm2", "--groups", "C2^2", "Q8"])
    assert code == 0
    assert [e["nu_p"] for e in report["entries"]] == [27, 27]
    assert all(e["q"] == 3 for e in report["entries"])
