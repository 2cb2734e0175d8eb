"""TLS handshake analysis and untrusted-certificate acceptance detection.

Parses the plaintext record layer of reassembled streams: ClientHello (for
the server name), the server Certificate chain, and the presence of client
application-data records.  A session's certificate chain is untrusted when
it is self-signed, outside its validity window at capture time, or fails to
anchor in the trust store.  A user *accepted* an untrusted certificate when
the session shows client application data; a client RST with no application
data counts as refusing the certificate.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass
from pathlib import Path

from cryptography import x509
from cryptography.hazmat.primitives import hashes

from ..errors import InputError
from .findings import NetFinding
from .reassembly import TcpStream

logger = logging.getLogger(__name__)

REC_CCS = 20
REC_ALERT = 21
REC_HANDSHAKE = 22
REC_APPDATA = 23

HS_CLIENT_HELLO = 1
HS_SERVER_HELLO = 2
HS_CERTIFICATE = 11

SNI_EXTENSION = 0


class TrustStore:
    """Anchor certificates identified by SHA-256 fingerprint."""

    def __init__(self, fingerprints: dict[str, str]):
        self._anchors = {fp.lower(): label for fp, label in fingerprints.items()}

    def __contains__(self, fingerprint: str) -> bool:
        return fingerprint.lower() in self._anchors

    def __len__(self) -> int:
        return len(self._anchors)


def load_trust_store(path) -> TrustStore:
    """One ``<hex sha256 fingerprint> <label>`` per line; colons tolerated."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"trust store not found: {path}")
    anchors = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fp, _, label = line.partition(" ")
        fp = fp.replace(":", "").lower()
        if len(fp) != 64 or any(c not in "0123456789abcdef" for c in fp):
            raise InputError(f"{path}:{lineno}: bad fingerprint {line!r}")
        anchors[fp] = label.strip() or f"anchor-{lineno}"
    return TrustStore(anchors)


@dataclass(frozen=True)
class CertSummary:
    subject: str
    issuer: str
    not_before: float
    not_after: float
    self_signed: bool
    fingerprint: str


@dataclass
class TlsSession:
    stream: TcpStream
    sni: str | None
    cert_chain: list[CertSummary]
    untrusted: bool
    client_appdata_after_handshake: bool
    rst_immediately_after_handshake: bool
    unparsed: bool = False

    @property
    def user_id(self) -> str | None:
        return self.stream.flow.user_id


def _iter_records(buf: bytes):
    pos = 0
    while pos + 5 <= len(buf):
        rtype = buf[pos]
        major = buf[pos + 1]
        length = struct.unpack_from("!H", buf, pos + 3)[0]
        if rtype not in (REC_CCS, REC_ALERT, REC_HANDSHAKE, REC_APPDATA) or major != 3:
            return
        end = pos + 5 + length
        if end > len(buf):
            return  # truncated record
        yield rtype, buf[pos + 5:end]
        pos = end


def _handshake_messages(records):
    """Concatenate handshake record payloads up to the first CCS, then split
    into (type, body) messages."""
    hs = bytearray()
    for rtype, payload in records:
        if rtype == REC_CCS:
            break
        if rtype == REC_HANDSHAKE:
            hs.extend(payload)
    messages = []
    pos = 0
    while pos + 4 <= len(hs):
        mtype = hs[pos]
        length = int.from_bytes(hs[pos + 1:pos + 4], "big")
        end = pos + 4 + length
        if end > len(hs):
            raise ValueError("truncated handshake message")
        messages.append((mtype, bytes(hs[pos + 4:end])))
        pos = end
    return messages


def _parse_sni(client_hello: bytes) -> str | None:
    try:
        pos = 2 + 32  # version + random
        sid_len = client_hello[pos]
        pos += 1 + sid_len
        cs_len = struct.unpack_from("!H", client_hello, pos)[0]
        pos += 2 + cs_len
        comp_len = client_hello[pos]
        pos += 1 + comp_len
        if pos + 2 > len(client_hello):
            return None
        ext_len = struct.unpack_from("!H", client_hello, pos)[0]
        pos += 2
        end = pos + ext_len
        while pos + 4 <= end:
            etype, elen = struct.unpack_from("!HH", client_hello, pos)
            pos += 4
            if etype == SNI_EXTENSION and elen >= 5:
                # server_name_list: 2B list len, 1B type, 2B name len, name
                name_len = struct.unpack_from("!H", client_hello, pos + 3)[0]
                raw = client_hello[pos + 5:pos + 5 + name_len]
                return raw.decode("ascii", "replace").lower()
            pos += elen
    except (IndexError, struct.error):
        raise ValueError("malformed ClientHello")
    return None


def _parse_certificates(body: bytes) -> list[x509.Certificate]:
    total = int.from_bytes(body[0:3], "big")
    chain = []
    pos = 3
    end = 3 + total
    while pos + 3 <= min(end, len(body)):
        clen = int.from_bytes(body[pos:pos + 3], "big")
        der = body[pos + 3:pos + 3 + clen]
        if len(der) != clen:
            raise ValueError("truncated certificate entry")
        chain.append(x509.load_der_x509_certificate(der))
        pos += 3 + clen
    return chain


def _summarize(cert: x509.Certificate) -> CertSummary:
    subject = cert.subject.rfc4514_string()
    issuer = cert.issuer.rfc4514_string()
    return CertSummary(
        subject=subject,
        issuer=issuer,
        not_before=cert.not_valid_before_utc.timestamp(),
        not_after=cert.not_valid_after_utc.timestamp(),
        self_signed=subject == issuer,
        fingerprint=cert.fingerprint(hashes.SHA256()).hex(),
    )


def _chain_valid(chain: list[CertSummary], trust_store: TrustStore) -> bool:
    if not chain:
        return False
    for child, parent in zip(chain, chain[1:]):
        if child.issuer != parent.subject:
            return False
    return chain[-1].fingerprint in trust_store


def is_tls_client_stream(data: bytes) -> bool:
    return (len(data) >= 6 and data[0] == REC_HANDSHAKE and data[1] == 3
            and data[5] == HS_CLIENT_HELLO)


def parse_tls_sessions(streams, trust_store: TrustStore,
                       capture_time: float) -> list[TlsSession]:
    """Extract TLS sessions from reassembled streams.

    Streams that do not open with a ClientHello record are skipped; streams
    that do but whose handshake fails to parse are kept flagged unparsed so
    they never contribute findings.
    """
    sessions = []
    for stream in streams:
        if not is_tls_client_stream(stream.client_bytes):
            continue
        client_records = list(_iter_records(stream.client_bytes))
        server_records = list(_iter_records(stream.server_bytes))
        client_appdata = any(rtype == REC_APPDATA for rtype, _ in client_records)
        rst_refusal = stream.rst_from_client and not client_appdata
        try:
            sni = None
            for mtype, body in _handshake_messages(client_records):
                if mtype == HS_CLIENT_HELLO:
                    sni = _parse_sni(body)
                    break
            chain = []
            for mtype, body in _handshake_messages(server_records):
                if mtype == HS_CERTIFICATE:
                    chain = [_summarize(c) for c in _parse_certificates(body)]
                    break
        except (ValueError, IndexError, struct.error) as exc:
            logger.debug("unparsed TLS stream %s: %s", stream.flow.flow_id, exc)
            sessions.append(TlsSession(stream, None, [], False,
                                       client_appdata, rst_refusal, unparsed=True))
            continue

        if chain:
            self_signed = len(chain) == 1 and chain[0].self_signed
            expired = any(
                not (c.not_before <= capture_time <= c.not_after) for c in chain
            )
            chain_ok = _chain_valid(chain, trust_store)
            untrusted = self_signed or expired or not chain_ok
        else:
            # no visible certificate (e.g. encrypted handshake): no evidence
            untrusted = False
        sessions.append(TlsSession(
            stream=stream,
            sni=sni,
            cert_chain=chain,
            untrusted=untrusted,
            client_appdata_after_handshake=client_appdata,
            rst_immediately_after_handshake=rst_refusal,
        ))
    return sessions


def detect_untrusted_cert_acceptance(sessions) -> list[NetFinding]:
    """One B5 finding per untrusted session the client went on using."""
    findings = []
    for s in sessions:
        if s.unparsed or not s.untrusted:
            continue
        if s.client_appdata_after_handshake and not s.rst_immediately_after_handshake:
            if s.user_id is None:
                continue
            name = s.sni or (s.cert_chain[0].subject if s.cert_chain else "unknown")
            findings.append(NetFinding(
                user_id=s.user_id,
                timestamp=s.stream.flow.first_ts,
                criterion_id="B5",
                detail=f"accepted untrusted certificate for {name}",
                flow_id=s.stream.flow.flow_id,
            ))
    return findings
