"""Classic pcap reader with per-packet user attribution.

Supports the classic capture format in both byte orders (magic 0xA1B2C3D4,
microsecond timestamps), link types Ethernet (optionally VLAN tagged) and
raw IP.  Yields decoded IPv4/IPv6 TCP and UDP packets; anything else is
counted and dropped.  Users are attached via an ip-to-user assignment map
with validity windows.
"""

from __future__ import annotations

import csv
import ipaddress
import struct
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import InputError

MAGIC_NATIVE = 0xA1B2C3D4
LINKTYPE_ETHERNET = 1
LINKTYPE_RAW = 101

TCP = 6
UDP = 17

FIN = 0x01
SYN = 0x02
RST = 0x04
PSH = 0x08
ACK = 0x10


@dataclass(frozen=True)
class Packet:
    ts: float
    src_ip: str
    dst_ip: str
    proto: str  # "tcp" or "udp"
    src_port: int
    dst_port: int
    payload: bytes
    seq: int = 0
    ack: int = 0
    flags: int = 0
    user_id: str | None = None


@dataclass
class CaptureStats:
    packets: int = 0
    truncated: int = 0
    non_ip: int = 0
    unattributed: int = 0


class IpUserMap:
    """ip -> user assignments with validity windows (open ends allowed)."""

    def __init__(self, entries: list[tuple[str, str, float, float]]):
        self._by_ip: dict[str, list[tuple[float, float, str]]] = {}
        for ip, uid, valid_from, valid_to in entries:
            self._by_ip.setdefault(ip, []).append((valid_from, valid_to, uid))

    def lookup(self, ip: str, ts: float) -> str | None:
        for valid_from, valid_to, uid in self._by_ip.get(ip, ()):
            if valid_from <= ts <= valid_to:
                return uid
        return None


def load_ip_user_map(path) -> IpUserMap:
    """CSV ``ip,uid,valid_from,valid_to`` (epoch seconds; empty = unbounded)."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"ip-user map not found: {path}")
    entries = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or row[0].strip().startswith("#"):
                continue
            if row[0].strip().lower() == "ip":
                continue
            if len(row) != 4:
                raise InputError(f"{path}:{lineno}: expected 'ip,uid,valid_from,valid_to'")
            ip, uid, valid_from, valid_to = (c.strip() for c in row)
            try:
                ipaddress.ip_address(ip)
            except ValueError:
                raise InputError(f"{path}:{lineno}: bad ip {ip!r}") from None
            lo = float(valid_from) if valid_from else float("-inf")
            hi = float(valid_to) if valid_to else float("inf")
            entries.append((ip, uid, lo, hi))
    return IpUserMap(entries)


def _decode_ip(data: bytes):
    """Return (src, dst, proto, transport_bytes) or None for non-IP/fragments."""
    if len(data) < 1:
        return None
    version = data[0] >> 4
    if version == 4:
        if len(data) < 20:
            return None
        ihl = (data[0] & 0x0F) * 4
        total_len = struct.unpack_from("!H", data, 2)[0]
        flags_frag = struct.unpack_from("!H", data, 6)[0]
        if flags_frag & 0x1FFF or flags_frag & 0x2000:  # fragment offset / MF
            return None
        proto = data[9]
        src = str(ipaddress.ip_address(data[12:16]))
        dst = str(ipaddress.ip_address(data[16:20]))
        end = min(total_len, len(data))
        if ihl < 20 or end < ihl:
            return None
        return src, dst, proto, data[ihl:end]
    if version == 6:
        if len(data) < 40:
            return None
        payload_len, next_header = struct.unpack_from("!HB", data, 4)
        src = str(ipaddress.ip_address(data[8:24]))
        dst = str(ipaddress.ip_address(data[24:40]))
        end = min(40 + payload_len, len(data))
        return src, dst, next_header, data[40:end]
    return None


def _decode_transport(src, dst, proto, seg, ts, user_id):
    if proto == TCP:
        if len(seg) < 20:
            return None
        sport, dport, seq, ack = struct.unpack_from("!HHII", seg, 0)
        offset = (seg[12] >> 4) * 4
        if offset < 20 or offset > len(seg):
            return None
        flags = seg[13]
        return Packet(ts, src, dst, "tcp", sport, dport, seg[offset:],
                      seq=seq, ack=ack, flags=flags, user_id=user_id)
    if proto == UDP:
        if len(seg) < 8:
            return None
        sport, dport, length = struct.unpack_from("!HHH", seg, 0)
        return Packet(ts, src, dst, "udp", sport, dport,
                      seg[8:max(8, min(length, len(seg)))], user_id=user_id)
    return None


def read_capture(path, ip_user_map: IpUserMap | None = None,
                 stats: CaptureStats | None = None):
    """Yield decoded, user-attributed packets from a classic pcap file.

    Truncated records are skipped and counted in ``stats``; a file without
    the classic magic is rejected.
    """
    path = Path(path)
    if stats is None:
        stats = CaptureStats()
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read capture {path}: {exc}") from exc
    if len(data) < 24:
        raise InputError(f"{path}: too short for a pcap global header")
    magic = struct.unpack_from("<I", data, 0)[0]
    if magic == MAGIC_NATIVE:
        endian = "<"
    elif struct.unpack_from(">I", data, 0)[0] == MAGIC_NATIVE:
        endian = ">"
    else:
        raise InputError(f"{path}: not a classic pcap capture (bad magic)")
    linktype = struct.unpack_from(endian + "I", data, 20)[0]
    if linktype not in (LINKTYPE_ETHERNET, LINKTYPE_RAW):
        raise InputError(f"{path}: unsupported link type {linktype}")

    pos = 24
    rec = struct.Struct(endian + "IIII")
    n = len(data)
    while pos < n:
        if pos + 16 > n:
            stats.truncated += 1
            break
        ts_sec, ts_usec, incl_len, _orig = rec.unpack_from(data, pos)
        pos += 16
        if pos + incl_len > n:
            stats.truncated += 1
            break
        frame = data[pos:pos + incl_len]
        pos += incl_len
        ts = ts_sec + ts_usec / 1e6

        if linktype == LINKTYPE_ETHERNET:
            if len(frame) < 14:
                stats.truncated += 1
                continue
            ethertype = struct.unpack_from("!H", frame, 12)[0]
            offset = 14
            if ethertype == 0x8100 and len(frame) >= 18:  # single VLAN tag
                ethertype = struct.unpack_from("!H", frame, 16)[0]
                offset = 18
            if ethertype not in (0x0800, 0x86DD):
                stats.non_ip += 1
                continue
            ip_bytes = frame[offset:]
        else:
            ip_bytes = frame

        decoded = _decode_ip(ip_bytes)
        if decoded is None:
            stats.non_ip += 1
            continue
        src, dst, proto, seg = decoded
        user_id = None
        if ip_user_map is not None:
            user_id = ip_user_map.lookup(src, ts) or ip_user_map.lookup(dst, ts)
            if user_id is None:
                stats.unattributed += 1
        packet = _decode_transport(src, dst, proto, seg, ts, user_id)
        if packet is None:
            stats.non_ip += 1
            continue
        stats.packets += 1
        yield packet
