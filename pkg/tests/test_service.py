import io
import json
import threading
import time

import pytest
from starlette.testclient import TestClient

from tscrub.ingest import write_csv
from tscrub.service import create_app

from conftest import YMDHMS, instant_to_cell
from tscrub.timestamps import parse_timestamp


def small_csv_bytes(n=30, gap_at=(7,), base_text="2021-05-01 00:00:00") -> bytes:
    base = parse_timestamp(base_text, YMDHMS)
    lines = ["time,value"]
    for k in range(n):
        value = "" if k in gap_at else "%.2f" % (50 + (k % 5))
        lines.append(f"{instant_to_cell(base + 3600 * k)},{value}")
    return ("\n".join(lines) + "\n").encode()


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "sessions")
    with TestClient(app) as c:
        yield c


def upload(client, payload=None) -> str:
    payload = payload if payload is not None else small_csv_bytes()
    resp = client.post("/sessions", files={"file": ("data.csv", payload, "text/csv")})
    assert resp.status_code == 201, resp.text
    return resp.json()["id"]


def start_clean(client, session_id, **overrides):
    body = {"date_format": "ymdHMS", "seed": 1, "replace_outliers": False}
    body.update(overrides)
    return client.post(f"/sessions/{session_id}/clean", json=body)


def wait_done(client, session_id, timeout=30.0) -> dict:
    deadline = time.time() + timeout
    while time.time() < deadline:
        meta = client.get(f"/sessions/{session_id}").json()
        if meta["status"] in ("done", "failed"):
            return meta
        time.sleep(0.02)
    raise TimeoutError("clean did not finish")


class TestUpload:
    def test_upload_metadata(self, client):
        resp = client.post(
            "/sessions", files={"file": ("d.csv", small_csv_bytes(), "text/csv")}
        )
        assert resp.status_code == 201
        doc = resp.json()
        assert doc["columns"] == ["time", "value"]
        assert doc["row_count"] == 30
        assert len(doc["preview"]) == 10

    def test_upload_cap(self, tmp_path):
        app = create_app(tmp_path / "s", max_upload_bytes=100)
        with TestClient(app) as client:
            resp = client.post(
                "/sessions",
                files={"file": ("d.csv", small_csv_bytes(), "text/csv")},
            )
            assert resp.status_code == 413
            assert resp.json()["code"] == "too_large"

    def test_bad_csv_rejected(self, client):
        resp = client.post("/sessions", files={"file": ("d.csv", b"", "text/csv")})
        assert resp.status_code == 400

    def test_status_includes_value_summaries(self, client):
        session_id = upload(client)
        meta = client.get(f"/sessions/{session_id}").json()
        assert meta["status"] == "uploaded"
        assert "value" in meta["value_summaries"]
        assert meta["value_summaries"]["value"]["min"] >= 50


class TestCleanFlow:
    def test_full_flow(self, client):
        session_id = upload(client)
        resp = start_clean(client, session_id)
        assert resp.status_code == 202
        meta = wait_done(client, session_id)
        assert meta["status"] == "done"
        report = client.get(f"/sessions/{session_id}/report")
        assert report.status_code == 200
        assert "# Missing Values:  1" in report.text
        doc = client.get(f"/sessions/{session_id}/report",
                         params={"format": "json"}).json()
        assert doc["clean_data"][7]["missing_type"] == "mcar"

    def test_report_before_clean_is_409(self, client):
        session_id = upload(client)
        resp = client.get(f"/sessions/{session_id}/report")
        assert resp.status_code == 409
        body = resp.json()
        assert set(body) == {"code", "message", "stage"}

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404
        assert client.get("/sessions/nope/report").status_code == 404

    def test_second_clean_while_cleaning_409(self, client, monkeypatch):
        import tscrub.service as service_mod

        release = threading.Event()
        original = service_mod.clean

        def slow_clean(*args, **kwargs):
            release.wait(timeout=10)
            return original(*args, **kwargs)

        monkeypatch.setattr(service_mod, "clean", slow_clean)
        session_id = upload(client)
        assert start_clean(client, session_id).status_code == 202
        second = start_clean(client, session_id)
        release.set()
        assert second.status_code == 409
        assert second.json()["code"] == "busy"
        assert wait_done(client, session_id)["status"] == "done"

    def test_failed_clean_reports_error(self, client):
        session_id = upload(client)
        start_clean(client, session_id, date_format="zzz")
        meta = wait_done(client, session_id)
        assert meta["status"] == "failed"
        assert meta["error"]["stage"] == "clean"
        assert client.get(f"/sessions/{session_id}/report").status_code == 409

    def test_user_code_not_accepted_over_http(self, client):
        session_id = upload(client)
        resp = start_clean(client, session_id, methods=["na_locf", "my_evil"])
        assert resp.status_code == 400
        assert resp.json()["code"] == "unknown_method"

    def test_empty_method_list_rejected(self, client):
        session_id = upload(client)
        assert start_clean(client, session_id, methods=[]).status_code == 400

    def test_concurrent_sessions_isolated(self, client):
        a = upload(client)
        b = upload(client, small_csv_bytes(n=40, gap_at=(3, 4, 5)))
        assert start_clean(client, a).status_code == 202
        assert start_clean(client, b).status_code == 202
        meta_a = wait_done(client, a)
        meta_b = wait_done(client, b)
        assert meta_a["status"] == meta_b["status"] == "done"
        doc_a = client.get(f"/sessions/{a}/report", params={"format": "json"}).json()
        doc_b = client.get(f"/sessions/{b}/report", params={"format": "json"}).json()
        assert len(doc_a["clean_data"]) == 30
        assert len(doc_b["clean_data"]) == 40


class TestWindowsEndpoint:
    def test_windows_payload(self, client):
        session_id = upload(client)
        start_clean(client, session_id)
        wait_done(client, session_id)
        resp = client.get(f"/sessions/{session_id}/windows",
                          params={"interval": "10"})
        assert resp.status_code == 200
        wins = resp.json()["windows"]
        assert len(wins) == 3
        assert [len(w["points"]) for w in wins] == [10, 10, 10]
        assert wins[0]["summary"]["n_missing_imputed"] == 1
        assert wins[0]["points"][7]["missing_type"] == "mcar"

    def test_bad_interval(self, client):
        session_id = upload(client)
        start_clean(client, session_id)
        wait_done(client, session_id)
        resp = client.get(f"/sessions/{session_id}/windows",
                          params={"interval": "1 fortnight"})
        assert resp.status_code == 400


class TestRevertEndpoint:
    def test_revert_updates_result(self, client):
        session_id = upload(client)
        start_clean(client, session_id)
        wait_done(client, session_id)
        doc = client.get(f"/sessions/{session_id}/report",
                         params={"format": "json"}).json()
        imp_ids = [e["id"] for e in doc["change_log"]
                   if e["kind"] == "imputed_missing"]
        assert len(imp_ids) == 1
        resp = client.post(f"/sessions/{session_id}/revert",
                           json={"change_ids": imp_ids})
        assert resp.status_code == 200
        updated = resp.json()
        assert updated["clean_data"][7]["value"] is None
        again = client.get(f"/sessions/{session_id}/report",
                           params={"format": "json"}).json()
        assert again["clean_data"][7]["value"] is None

    def test_revert_unknown_id(self, client):
        session_id = upload(client)
        start_clean(client, session_id)
        wait_done(client, session_id)
        resp = client.post(f"/sessions/{session_id}/revert",
                           json={"change_ids": [999]})
        assert resp.status_code == 404

    def test_revert_structural_conflict(self, client):
        payload = small_csv_bytes(n=30, gap_at=())
        base = parse_timestamp("2021-05-01 00:00:00", YMDHMS)
        extra = f"{instant_to_cell(base + 3600 * 2)},52.00\n"
        payload = payload + extra.encode()  # equal-valued duplicate row
        session_id = upload(client, payload)
        start_clean(client, session_id)
        wait_done(client, session_id)
        doc = client.get(f"/sessions/{session_id}/report",
                         params={"format": "json"}).json()
        structural = [e["id"] for e in doc["change_log"]
                      if e["kind"] == "deduplicated"]
        assert structural
        resp = client.post(f"/sessions/{session_id}/revert",
                           json={"change_ids": structural})
        assert resp.status_code == 409


class TestExport:
    def test_roundtrip_row_count(self, client):
        session_id = upload(client, small_csv_bytes(n=10, gap_at=(2,)))
        start_clean(client, session_id)
        wait_done(client, session_id)
        resp = client.get(f"/sessions/{session_id}/export")
        assert resp.status_code == 200
        assert resp.headers["content-type"].startswith("text/csv")
        lines = resp.text.strip().splitlines()
        assert lines[0] == "time,value"
        assert len(lines) == 1 + 10


class TestPersistence:
    def test_done_session_survives_restart(self, tmp_path):
        data_dir = tmp_path / "sessions"
        with TestClient(create_app(data_dir)) as client:
            session_id = upload(client)
            start_clean(client, session_id)
            wait_done(client, session_id)
        with TestClient(create_app(data_dir)) as client2:
            meta = client2.get(f"/sessions/{session_id}").json()
            assert meta["status"] == "done"
            report = client2.get(f"/sessions/{session_id}/report")
            assert report.status_code == 200
            assert "# Summary of cleaned data:" in report.text
