import hashlib
import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from isascore.errors import InputError
from isascore.reputation import (
    RemoteClient,
    RemoteConfig,
    ReputationDb,
    load_hash_list,
    load_reputation_db,
    remote_enrich,
)


def make_db(tmp_path, rows):
    path = tmp_path / "db.csv"
    path.write_text("\n".join(rows) + "\n")
    return load_reputation_db(path)


def test_direct_parse(tmp_path):
    db = make_db(tmp_path, ["evil.example,malware,"])
    verdict = db.lookup_domain("evil.example")
    assert verdict.security_categories == {"malware"}
    assert verdict.content_categories == set()
    assert verdict.matched_suffix == "evil.example"


def test_duplicate_suffix_rejected(tmp_path):
    with pytest.raises(InputError, match="duplicate"):
        make_db(tmp_path, ["a.example,malware,", "a.example,spam,"])


def test_malformed_row_rejected_with_line_number(tmp_path):
    with pytest.raises(InputError, match=":2:"):
        make_db(tmp_path, ["good.example,,news", "too,many,commas,here"])


def test_unknown_category_rejected(tmp_path):
    with pytest.raises(InputError, match="unknown category"):
        make_db(tmp_path, ["x.example,weird,"])


def test_subdomain_matches_suffix(tmp_path):
    db = make_db(tmp_path, ["example.com,malware,"])
    assert db.lookup_domain("a.example.com").matched_suffix == "example.com"


def test_longest_suffix_wins(tmp_path):
    db = make_db(tmp_path, ["example.com,malware,", "a.example.com,spam,"])
    verdict = db.lookup_domain("b.a.example.com")
    assert verdict.matched_suffix == "a.example.com"
    assert verdict.security_categories == {"spam"}


def test_label_boundary_respected(tmp_path):
    db = make_db(tmp_path, ["example.com,malware,"])
    verdict = db.lookup_domain("notexample.com")
    assert verdict.matched_suffix is None
    assert verdict.security_categories == set()


def test_lookup_is_case_insensitive_and_dot_tolerant(tmp_path):
    db = make_db(tmp_path, ["Example.COM,malware,"])
    assert db.lookup_domain("WWW.EXAMPLE.COM.").matched_suffix == "example.com"


def test_exact_stored_suffix_always_matches(tmp_path):
    rows = [f"host{i}.zone{i % 7}.example,malware," for i in range(200)]
    db = make_db(tmp_path, rows)
    for i in range(200):
        name = f"host{i}.zone{i % 7}.example"
        assert db.lookup_domain(name).matched_suffix == name


def test_ten_k_row_fixture_round_trips(tmp_path):
    rows = [f"site{i}.d{i % 13}.test,phishing,news" for i in range(10_000)]
    db = make_db(tmp_path, rows)
    assert len(db) == 10_000
    for i in range(0, 10_000, 397):
        suffix = f"site{i}.d{i % 13}.test"
        verdict = db.lookup_domain("deep.sub." + suffix)
        assert verdict.matched_suffix == suffix


def test_adding_record_does_not_change_unrelated_verdicts(tmp_path):
    base_rows = ["one.example,malware,", "two.example,,news"]
    db1 = make_db(tmp_path, base_rows)
    queries = ["one.example", "x.two.example", "unrelated.test", "three.example"]
    before = [db1.lookup_domain(q) for q in queries]
    (tmp_path / "db.csv").unlink()
    db2 = make_db(tmp_path, base_rows + ["three.example,spam,"])
    for q, prev in zip(queries, before):
        if q == "three.example":
            continue
        assert db2.lookup_domain(q) == prev


def test_empty_name_rejected(tmp_path):
    db = make_db(tmp_path, ["x.example,,news"])
    with pytest.raises(InputError):
        db.lookup_domain("")


# --- file hashes -----------------------------------------------------------

def test_hash_lookup_planted_fixture(tmp_path):
    hashes = [hashlib.sha256(f"file-{i}".encode()).hexdigest() for i in range(100)]
    planted = set(hashes[3::15])  # 7 of the 100
    assert len(planted) == 7
    hash_path = tmp_path / "hashes.txt"
    hash_path.write_text("\n".join(sorted(planted)) + "\n")
    db = ReputationDb([], load_hash_list(hash_path))
    flagged = [h for h in hashes if db.lookup_file_hash(h)]
    assert sorted(flagged) == sorted(planted)


def test_unlisted_hash_is_clean(tmp_path):
    db = ReputationDb([], frozenset())
    assert db.lookup_file_hash("a" * 64) is False


def test_malformed_hash_rejected():
    db = ReputationDb([], frozenset())
    with pytest.raises(InputError, match="malformed"):
        db.lookup_file_hash("xyz")


def test_malformed_hash_row_rejected(tmp_path):
    path = tmp_path / "hashes.txt"
    path.write_text("nothex\n")
    with pytest.raises(InputError, match=":1:"):
        load_hash_list(path)


# --- remote enrichment ------------------------------------------------------

class _StubHandler(BaseHTTPRequestHandler):
    response_code = 200
    response_body = {"security": ["phishing"], "content": ["news"], "match": "x.test"}

    def do_GET(self):
        body = json.dumps(self.response_body).encode()
        self.send_response(self.response_code)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_server():
    server = HTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}/lookup"
    server.shutdown()


def test_remote_disabled_is_an_error():
    with pytest.raises(InputError, match="disabled"):
        remote_enrich(RemoteConfig(enabled=False), "x.test")


def test_remote_verdict_mapped(stub_server):
    _StubHandler.response_code = 200
    config = RemoteConfig(enabled=True, endpoint=stub_server, api_key="k")
    verdict = RemoteClient(config).enrich("x.test")
    assert verdict.source == "remote"
    assert verdict.security_categories == {"phishing"}
    assert verdict.content_categories == {"news"}
    assert verdict.error is None


def test_remote_500_degrades_without_raising(stub_server):
    _StubHandler.response_code = 500
    try:
        config = RemoteConfig(enabled=True, endpoint=stub_server)
        verdict = RemoteClient(config).enrich("x.test")
    finally:
        _StubHandler.response_code = 200
    assert verdict.source == "remote"
    assert verdict.security_categories == set()
    assert verdict.error is not None


def test_remote_connection_refused_degrades():
    config = RemoteConfig(enabled=True, endpoint="http://127.0.0.1:1/lookup",
                          timeout=0.5)
    verdict = RemoteClient(config).enrich("x.test")
    assert verdict.error is not None
    assert verdict.security_categories == set()
