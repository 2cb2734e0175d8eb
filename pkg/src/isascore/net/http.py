"""Plaintext HTTP/1.x transaction parsing and device profiling.

Requests are read off the client byte stream and paired in order with the
responses on the server stream (pipelining splits naturally).  Bodies are
delimited by Content-Length or chunked encoding; the final response of a
terminated stream may run to end-of-stream.  Response bodies are decoded
per Content-Encoding (gzip, deflate, identity) before inspection.
"""

from __future__ import annotations

import logging
import re
import zlib
from dataclasses import dataclass, field

from ..versions import VersionTable
from .reassembly import TcpStream

logger = logging.getLogger(__name__)

_REQUEST_LINE = re.compile(rb"^([A-Z]+) (\S+) HTTP/1\.[01]$")
_STATUS_LINE = re.compile(rb"^HTTP/1\.[01] (\d{3})(?: .*)?$")
_ANDROID_UA = re.compile(r"Android[ /](\d+(?:\.\d+)*)")

# content types that are ordinary page assets, not downloads
_PAGE_TYPES = {
    "text/html", "text/css", "text/javascript",
    "application/javascript", "application/x-javascript",
}
APK_CONTENT_TYPE = "application/vnd.android.package-archive"


@dataclass
class HttpTransaction:
    stream: TcpStream
    ts: float
    host: str
    path: str
    method: str
    user_agent: str | None
    status: int | None
    content_type: str | None
    content_encoding: str | None
    is_download: bool
    is_apk: bool
    decoded_body: bytes | None
    request_query: str
    request_body: bytes | None

    @property
    def user_id(self) -> str | None:
        return self.stream.flow.user_id


@dataclass
class _Message:
    start: bytes
    headers: dict[str, str]
    body: bytes | None


def _split_headers(block: bytes) -> tuple[bytes, dict[str, str]]:
    lines = block.split(b"\r\n")
    headers = {}
    for line in lines[1:]:
        name, sep, value = line.partition(b":")
        if sep:
            headers[name.strip().lower().decode("latin-1")] = value.strip().decode("latin-1")
    return lines[0], headers


def _read_chunked(data: bytes, pos: int) -> tuple[bytes | None, int]:
    body = bytearray()
    while True:
        eol = data.find(b"\r\n", pos)
        if eol < 0:
            return None, len(data)
        try:
            size = int(data[pos:eol].split(b";")[0], 16)
        except ValueError:
            return None, len(data)
        pos = eol + 2
        if size == 0:
            end = data.find(b"\r\n", pos)
            return bytes(body), (end + 2 if end >= 0 else len(data))
        body.extend(data[pos:pos + size])
        pos += size + 2


def _parse_messages(data: bytes, is_request: bool, allow_tail_body: bool):
    """Split one direction into messages; returns (messages, malformed_count)."""
    messages = []
    malformed = 0
    pos = 0
    pattern = _REQUEST_LINE if is_request else _STATUS_LINE
    while pos < len(data):
        head_end = data.find(b"\r\n\r\n", pos)
        if head_end < 0:
            if data[pos:].strip():
                malformed += 1
            break
        start, headers = _split_headers(data[pos:head_end])
        if not pattern.match(start):
            malformed += 1
            break
        pos = head_end + 4
        body: bytes | None = None
        if headers.get("transfer-encoding", "").lower() == "chunked":
            body, pos = _read_chunked(data, pos)
        elif "content-length" in headers:
            try:
                length = int(headers["content-length"])
            except ValueError:
                malformed += 1
                break
            body = data[pos:pos + length]
            pos += length
        elif not is_request and allow_tail_body and pos < len(data):
            # delimited by connection close
            body = data[pos:]
            pos = len(data)
        messages.append(_Message(start, headers, body))
    return messages, malformed


def _decode_body(body: bytes | None, encoding: str | None) -> bytes | None:
    if body is None:
        return None
    enc = (encoding or "identity").lower()
    try:
        if enc == "gzip":
            return zlib.decompress(body, wbits=31)
        if enc == "deflate":
            try:
                return zlib.decompress(body)
            except zlib.error:
                return zlib.decompress(body, wbits=-15)
    except zlib.error as exc:
        logger.debug("body decode failed (%s): %s", enc, exc)
        return None
    return body


def parse_http_transactions(streams) -> tuple[list[HttpTransaction], int]:
    """Parse every plaintext HTTP/1.x stream into transactions.

    Returns the transactions plus the count of malformed messages that were
    skipped.  Transactions inherit the stream's first timestamp; ordering
    within a stream is preserved.
    """
    transactions = []
    skipped = 0
    for stream in streams:
        if not _REQUEST_LINE.match(stream.client_bytes.split(b"\r\n", 1)[0]):
            continue
        closed = stream.terminated_by in ("fin", "rst")
        requests, bad_req = _parse_messages(stream.client_bytes, True, False)
        responses, bad_resp = _parse_messages(stream.server_bytes, False, closed)
        skipped += bad_req + bad_resp
        for i, req in enumerate(requests):
            m = _REQUEST_LINE.match(req.start)
            method, target = m.group(1).decode(), m.group(2).decode("latin-1")
            resp = responses[i] if i < len(responses) else None
            status = None
            content_type = None
            content_encoding = None
            decoded = None
            disposition = ""
            if resp is not None:
                sm = _STATUS_LINE.match(resp.start)
                status = int(sm.group(1)) if sm else None
                content_type = resp.headers.get("content-type")
                content_encoding = resp.headers.get("content-encoding")
                disposition = resp.headers.get("content-disposition", "")
                body = None if method == "HEAD" else resp.body
                decoded = _decode_body(body, content_encoding)

            path, _, query = target.partition("?")
            ct = (content_type or "").split(";")[0].strip().lower()
            has_body = bool(decoded)
            is_download = (
                "attachment" in disposition.lower()
                or (has_body and ct and ct not in _PAGE_TYPES
                    and not ct.startswith("image/"))
            )
            is_apk = ct == APK_CONTENT_TYPE or path.lower().endswith(".apk")
            transactions.append(HttpTransaction(
                stream=stream,
                ts=stream.flow.first_ts,
                host=req.headers.get("host", "").split(":")[0].lower(),
                path=path,
                method=method,
                user_agent=req.headers.get("user-agent"),
                status=status,
                content_type=content_type,
                content_encoding=content_encoding,
                is_download=is_download or is_apk,
                is_apk=is_apk,
                decoded_body=decoded,
                request_query=query,
                request_body=_decode_body(req.body, req.headers.get("content-encoding")),
            ))
    return transactions, skipped


def extract_device_profile(transactions, version_table: VersionTable) -> dict[str, float]:
    """Per-user OS1 indicator from Android versions in user-agent strings.

    When transactions disagree, the most recent one wins; the version is
    compared against the release table entry effective at that time.
    """
    latest: dict[str, tuple[float, int, str, float]] = {}
    for idx, tx in enumerate(transactions):
        if tx.user_id is None or not tx.user_agent:
            continue
        m = _ANDROID_UA.search(tx.user_agent)
        if not m:
            continue
        key = (tx.ts, idx)
        prev = latest.get(tx.user_id)
        if prev is None or key > (prev[0], prev[1]):
            latest[tx.user_id] = (tx.ts, idx, m.group(1), tx.ts)
    out = {}
    for uid, (_, _, version, ts) in latest.items():
        current = version_table.latest_at(ts)
        if current is None:
            continue
        out[uid] = 1.0 if version == current else 0.0
    return out
