"""TCP stream reassembly.

Segments are stitched into per-direction byte streams in sequence-number
order.  Duplicate and overlapping data is resolved first-arrival-wins, so a
retransmission can never rewrite bytes already captured.  Out-of-order data
is buffered up to a window; once the window overflows, the missing range is
recorded as a gap and the stream continues past it (without placeholder
bytes), which downstream parsers treat as best-effort input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pcap import ACK, FIN, RST, SYN, Packet

DEFAULT_WINDOW = 256 * 1024

_SEQ_MOD = 1 << 32


@dataclass(frozen=True)
class Flow:
    src_ip: str
    src_port: int
    dst_ip: str
    dst_port: int
    proto: str
    user_id: str | None
    first_ts: float
    last_ts: float

    @property
    def flow_id(self) -> str:
        return (f"{self.proto}:{self.src_ip}:{self.src_port}-"
                f"{self.dst_ip}:{self.dst_port}@{self.first_ts:.6f}")


@dataclass
class TcpStream:
    flow: Flow
    client_bytes: bytes
    server_bytes: bytes
    #: (side, offset, length) for every unfilled range, side in {client, server}
    gaps: list[tuple[str, int, int]]
    terminated_by: str  # fin | rst | timeout
    rst_from_client: bool


class _Direction:
    __slots__ = ("base", "expected", "chunks", "pending", "gaps", "window")

    def __init__(self, window: int):
        self.base: int | None = None
        self.expected = 0
        self.chunks: list[bytes] = []
        self.pending: dict[int, bytes] = {}
        self.gaps: list[tuple[int, int]] = []
        self.window = window

    def on_segment(self, seq: int, payload: bytes, syn: bool) -> None:
        if syn:
            if self.base is None:
                self.base = (seq + 1) % _SEQ_MOD
            if not payload:
                return
        if self.base is None:
            self.base = seq
        rel = (seq - self.base) % _SEQ_MOD
        if rel >= _SEQ_MOD // 2:  # segment from before the baseline
            trim = _SEQ_MOD - rel
            if trim >= len(payload):
                return
            payload = payload[trim:]
            rel = 0
        if not payload:
            return
        for piece_off, piece in self._clip(rel, payload):
            if piece_off == self.expected:
                self.chunks.append(piece)
                self.expected += len(piece)
                self._drain()
            else:
                self.pending[piece_off] = piece
        self._enforce_window()

    def _clip(self, rel: int, payload: bytes):
        """Drop the parts of [rel, rel+len) already assembled or buffered."""
        if rel < self.expected:
            cut = self.expected - rel
            if cut >= len(payload):
                return []
            payload = payload[cut:]
            rel = self.expected
        pieces = [(rel, payload)]
        for p0 in sorted(self.pending):
            p1 = p0 + len(self.pending[p0])
            next_pieces = []
            for off, chunk in pieces:
                end = off + len(chunk)
                if end <= p0 or off >= p1:  # no overlap
                    next_pieces.append((off, chunk))
                    continue
                if off < p0:
                    next_pieces.append((off, chunk[: p0 - off]))
                if end > p1:
                    next_pieces.append((p1, chunk[p1 - off:]))
            pieces = next_pieces
            if not pieces:
                break
        return pieces

    def _drain(self) -> None:
        while self.expected in self.pending:
            chunk = self.pending.pop(self.expected)
            self.chunks.append(chunk)
            self.expected += len(chunk)

    def _enforce_window(self) -> None:
        while self.pending:
            max_end = max(off + len(b) for off, b in self.pending.items())
            if max_end - self.expected <= self.window:
                return
            # give up on the lowest missing range and continue past it
            next_off = min(self.pending)
            self.gaps.append((self.expected, next_off - self.expected))
            self.expected = next_off
            self._drain()

    def finish(self) -> bytes:
        while self.pending:
            next_off = min(self.pending)
            if next_off > self.expected:
                self.gaps.append((self.expected, next_off - self.expected))
                self.expected = next_off
            self._drain()
        return b"".join(self.chunks)


class _FlowState:
    __slots__ = ("client", "server", "c_dir", "s_dir", "first_ts", "last_ts",
                 "user_id", "fin_seen", "rst_seen", "rst_from_client")

    def __init__(self, client, server, first_ts, user_id, window):
        self.client = client  # (ip, port)
        self.server = server
        self.c_dir = _Direction(window)
        self.s_dir = _Direction(window)
        self.first_ts = first_ts
        self.last_ts = first_ts
        self.user_id = user_id
        self.fin_seen = False
        self.rst_seen = False
        self.rst_from_client = False


def reassemble_streams(packets, window: int = DEFAULT_WINDOW) -> list[TcpStream]:
    """Group TCP packets into flows and reassemble both directions.

    The client side is the sender of the first SYN (or of the first packet
    seen when the handshake was not captured).
    """
    flows: dict[frozenset, _FlowState] = {}
    order: list[frozenset] = []
    for pkt in packets:
        if pkt.proto != "tcp":
            continue
        a = (pkt.src_ip, pkt.src_port)
        b = (pkt.dst_ip, pkt.dst_port)
        key = frozenset((a, b))
        state = flows.get(key)
        if state is None:
            # first packet's sender is the client, unless it is the SYN-ACK
            if pkt.flags & SYN and pkt.flags & ACK:
                client, server = b, a
            else:
                client, server = a, b
            state = _FlowState(client, server, pkt.ts, pkt.user_id, window)
            flows[key] = state
            order.append(key)
        state.last_ts = max(state.last_ts, pkt.ts)
        if state.user_id is None:
            state.user_id = pkt.user_id
        direction = state.c_dir if a == state.client else state.s_dir
        direction.on_segment(pkt.seq, pkt.payload, bool(pkt.flags & SYN))
        if pkt.flags & RST and not state.rst_seen:
            state.rst_seen = True
            state.rst_from_client = a == state.client
        if pkt.flags & FIN:
            state.fin_seen = True

    streams = []
    for key in order:
        st = flows[key]
        client_bytes = st.c_dir.finish()
        server_bytes = st.s_dir.finish()
        gaps = [("client", off, length) for off, length in st.c_dir.gaps]
        gaps += [("server", off, length) for off, length in st.s_dir.gaps]
        terminated = "rst" if st.rst_seen else ("fin" if st.fin_seen else "timeout")
        flow = Flow(
            src_ip=st.client[0], src_port=st.client[1],
            dst_ip=st.server[0], dst_port=st.server[1],
            proto="tcp", user_id=st.user_id,
            first_ts=st.first_ts, last_ts=st.last_ts,
        )
        streams.append(TcpStream(
            flow=flow,
            client_bytes=client_bytes,
            server_bytes=server_bytes,
            gaps=gaps,
            terminated_by=terminated,
            rst_from_client=st.rst_seen and st.rst_from_client,
        ))
    return streams
