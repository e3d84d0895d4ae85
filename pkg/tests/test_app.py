from approx import CertificateError
from config import Config


def test_health(client, ledger):
    resp = client.get("/health")
    assert resp.status_code == 200
    data = resp.get_json()
    assert data["server"] == "ok"
    assert data["ledger"] == str(ledger.path)


def test_tree(client):
    data = client.get("/api/tree?bound=30").get_json()
    assert data["count"] == 5
    assert data["max_m"] == 29


def test_form(client):
    resp = client.get("/api/form?m=5")
    assert resp.status_code == 200
    data = resp.get_json()
    assert data["polynomial"] == "5x^2+11xy-5y^2"
    assert data["coordinates"] == {"mu": 1, "nu": 1}


def test_bad_input_is_a_400(client):
    cases = [
        ("/api/form", {"m": 6}),
        ("/api/form", {}),
        ("/api/form", {"m": "five"}),
        ("/api/expand", {"theta": "[0;x]"}),
        ("/api/tree", {"bound": 0}),
    ]
    for url, params in cases:
        resp = client.get(url, query_string=params)
        assert resp.status_code == 400, (url, params)
        data = resp.get_json()
        assert data["status"] == "error"
        assert data["message"]


def test_expand(client):
    data = client.get("/api/expand", query_string={"theta": "sqrt(2)"}).get_json()
    assert data["expansion"] == "[1;(2)]"


def test_phi(client):
    resp = client.get("/api/phi", query_string={"theta": "[0;(2,1,1,2)]", "qmax": 1000})
    assert resp.status_code == 200
    data = resp.get_json()
    assert data["phi"] == "(75-5*sqrt(221))/2"
    assert data["argmin_q"] == 5


def test_phi_inconclusive_is_a_422(client):
    resp = client.get("/api/phi", query_string={"theta": "[0;(2,1,1,2)]", "qmax": 3})
    assert resp.status_code == 422
    data = resp.get_json()
    assert data["status"] == "inconclusive"
    assert data["partial"]["status"] == "inconclusive"


def test_value(client):
    data = client.get("/api/value", query_string={"theta": "[0;(2)]"}).get_json()
    assert data["value"]["exact"] == "(0+1*sqrt(2))/4"
    assert data["exceeds_third"] is True


def test_verify(client):
    data = client.get("/api/verify?m=2&qmax=100").get_json()
    assert data["passed"]


def test_classify(client):
    data = client.get("/api/classify", query_string={"theta": "(-11+1*sqrt(221))/10"}).get_json()
    assert (data["attribution"]["m"], data["attribution"]["root"]) == (5, "alpha")
    assert data["verdict"]["verdict"] == "all_below_3"


def test_sequence_routes(client):
    data = client.get("/api/companion", query_string={"seq": "|1"}).get_json()
    assert data["companion"] == "0|1"
    data = client.get("/api/companion", query_string={"seq": "|1", "family": "M10"}).get_json()
    assert data["companion"] == "2|1"
    data = client.get("/api/decompose", query_string={"seq": "|1,0,0", "family": "M10"}).get_json()
    assert data["type"] == "T"
    assert data["derived"] == "|1,0"
    resp = client.get("/api/companion", query_string={"seq": "|1", "family": "M11"})
    assert resp.status_code == 400


def test_record_then_recent(client, ledger):
    client.get("/api/form?m=13&record=1")
    client.get("/api/tree?bound=30")
    client.get("/api/tree?bound=5&record=true")
    items = client.get("/api/ledger/recent").get_json()["items"]
    assert [e["kind"] for e in items] == ["tree", "form"]
    assert items[1]["record"]["triple"]["m"] == 13
    assert client.get("/api/ledger/recent?limit=1").get_json()["items"] == items[:1]
    assert client.get("/api/ledger/recent?limit=0").get_json()["items"] == []


def test_large_first_quotient_is_classified(client):
    data = client.get("/api/classify", query_string={"theta": "[0;3,(2)]"}).get_json()
    assert data["attribution"] is None
    assert data["verdict"]["witness"]["n"] == 0


def test_cross_check_failure_is_a_500(client, monkeypatch):
    def failing(*args, **kwargs):
        raise CertificateError("scan disagrees")

    monkeypatch.setattr("app.classify_theta", failing)
    resp = client.get("/api/classify", query_string={"theta": "sqrt(2)"})
    assert resp.status_code == 500
    data = resp.get_json()
    assert data["status"] == "error"
    assert "scan disagrees" in data["message"]


def test_request_limits_are_a_400(client, monkeypatch):
    monkeypatch.setattr(Config, "MAX_BOUND", 100)
    monkeypatch.setattr(Config, "MAX_SCAN", 50)
    monkeypatch.setattr(Config, "MAX_QMAX", 1000)
    assert client.get("/api/tree?bound=1000").status_code == 400
    assert client.get("/api/verify?m=5&qmax=100").status_code == 400
    assert client.get("/api/phi", query_string={"theta": "sqrt(2)", "qmax": 5000}).status_code == 400
    assert client.get("/api/classify", query_string={"theta": "sqrt(2)", "cap": 1000}).status_code == 400
    assert client.get("/api/tree?bound=30").status_code == 200
