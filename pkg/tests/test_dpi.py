import hashlib

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netfixtures import TcpSession, http_request, http_response, write_pcap
from oracles import luhn_reference

from isascore.net.dpi import find_card_numbers, find_gps_pairs, luhn_valid, scan_payloads
from isascore.net.http import parse_http_transactions
from isascore.net.pcap import IpUserMap, read_capture
from isascore.net.reassembly import reassemble_streams


def transactions_for(tmp_path, req, resp):
    s = TcpSession(("10.0.0.1", 40000), ("93.184.216.34", 80),
                   1_600_000_000.0).handshake()
    s.client_send(req)
    s.server_send(resp)
    s.fin()
    path = tmp_path / "dpi.pcap"
    write_pcap(path, s.frames)
    ip_map = IpUserMap([("10.0.0.1", "u1", float("-inf"), float("inf"))])
    streams = reassemble_streams(read_capture(path, ip_map))
    txs, _ = parse_http_transactions(streams)
    return txs


def b3_details(findings):
    return [f.detail for f in findings if f.criterion_id == "B3"]


# --- pattern primitives ------------------------------------------------------

def test_luhn_valid_canonical_pan():
    assert luhn_valid("4111111111111111") is True


def test_luhn_invalid_off_by_one():
    assert luhn_valid("4111111111111112") is False


@settings(max_examples=200, deadline=None)
@given(st.text("0123456789", min_size=13, max_size=19))
def test_luhn_matches_independent_reference(digits):
    assert luhn_valid(digits) == luhn_reference(digits)


def test_card_finder_accepts_separators():
    assert find_card_numbers("pan=4111 1111 1111 1111&x=1") == ["4111111111111111"]
    assert find_card_numbers("pan=4111-1111-1111-1111") == ["4111111111111111"]


def test_card_finder_rejects_luhn_invalid():
    assert find_card_numbers("4111111111111112") == []


def test_card_finder_ignores_overlong_digit_runs():
    assert find_card_numbers("41111111111111110000000") == []


def test_gps_pairs_with_key_hints_and_ranges():
    assert find_gps_pairs("lat=31.26&lon=34.79") == [(31.26, 34.79)]
    assert find_gps_pairs("latitude: -89.5, longitude: 179.9") == [(-89.5, 179.9)]
    assert find_gps_pairs("lat=99.0&lon=34.79") == []     # out of range
    assert find_gps_pairs("x=31.26&y=34.79") == []        # no key hints


# --- payload scanning ---------------------------------------------------------

def test_gzip_body_with_three_pii_kinds_gives_three_findings(tmp_path):
    body = (b"contact=user@example.com\n"
            b"card=4111111111111111\n"
            b"password=hunter2\n")
    txs = transactions_for(
        tmp_path,
        http_request(path="/page"),
        http_response(content_type="text/plain", body=body, gzip_body=True),
    )
    findings = scan_payloads(txs)
    assert len(b3_details(findings)) == 3


def test_luhn_invalid_control_yields_no_card_finding(tmp_path):
    body = b"card=4111111111111112&note=control"
    txs = transactions_for(
        tmp_path,
        http_request(path="/p"),
        http_response(content_type="text/plain", body=body),
    )
    assert b3_details(scan_payloads(txs)) == []


def test_email_in_request_body_found(tmp_path):
    txs = transactions_for(
        tmp_path,
        http_request(method="POST", path="/submit", body=b"mail=person@site.org"),
        http_response(body=b"<html>ok</html>"),
    )
    details = b3_details(scan_payloads(txs))
    assert len(details) == 1
    assert "email" in details[0]


def test_password_key_in_query_string_found(tmp_path):
    txs = transactions_for(
        tmp_path,
        http_request(path="/login?user=a&pwd=abc123"),
        http_response(body=b"<html>ok</html>"),
    )
    details = b3_details(scan_payloads(txs))
    assert len(details) == 1
    assert "password-field" in details[0]


def test_same_value_echoed_back_counted_once(tmp_path):
    txs = transactions_for(
        tmp_path,
        http_request(method="POST", path="/s", body=b"mail=dup@site.org"),
        http_response(content_type="text/plain", body=b"saved dup@site.org"),
    )
    assert len(b3_details(scan_payloads(txs))) == 1


def test_plain_http_download_emits_b2_with_hash(tmp_path):
    payload = b"\x7fELF" + bytes(range(64))
    txs = transactions_for(
        tmp_path,
        http_request(path="/tool.bin"),
        http_response(content_type="application/octet-stream", body=payload),
    )
    b2 = [f for f in scan_payloads(txs) if f.criterion_id == "B2"]
    assert len(b2) == 1
    assert hashlib.sha256(payload).hexdigest() in b2[0].detail


def test_gps_pair_in_plain_body_found(tmp_path):
    txs = transactions_for(
        tmp_path,
        http_request(method="POST", path="/loc", body=b"lat=31.26&lon=34.79"),
        http_response(body=b"<html>ok</html>"),
    )
    details = b3_details(scan_payloads(txs))
    assert len(details) == 1
    assert "gps" in details[0]
