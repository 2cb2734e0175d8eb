import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isascore.net.pcap import ACK, FIN, PSH, RST, SYN, Packet
from isascore.net.reassembly import reassemble_streams

C = ("10.0.0.1", 40000)
S = ("93.184.216.34", 80)


def pkt(src, dst, seq, payload=b"", flags=PSH | ACK, ts=1.0, ack=0):
    return Packet(ts, src[0], dst[0], "tcp", src[1], dst[1], payload,
                  seq=seq, ack=ack, flags=flags, user_id="u1")


def handshake(t=0.0):
    return [
        pkt(C, S, 100, flags=SYN, ts=t),
        pkt(S, C, 500, flags=SYN | ACK, ts=t + 0.01, ack=101),
        pkt(C, S, 101, flags=ACK, ts=t + 0.02, ack=501),
    ]


def client_segments(chunks, base=101, t=1.0):
    packets = []
    offset = 0
    for chunk in chunks:
        packets.append(pkt(C, S, base + offset, chunk, ts=t))
        offset += len(chunk)
        t += 0.01
    return packets


def test_in_order_segments_concatenate():
    packets = handshake() + client_segments([b"hello ", b"world"])
    (stream,) = reassemble_streams(packets)
    assert stream.client_bytes == b"hello world"
    assert stream.server_bytes == b""
    assert stream.gaps == []
    assert stream.flow.user_id == "u1"


def test_out_of_order_two_segments():
    packets = handshake()
    segs = client_segments([b"AAAA", b"BB"])
    packets += [segs[1], segs[0]]  # B arrives first
    (stream,) = reassemble_streams(packets)
    assert stream.client_bytes == b"AAAABB"
    assert stream.gaps == []


def test_retransmission_deduplicated():
    packets = handshake() + client_segments([b"abcd"])
    packets.append(pkt(C, S, 101, b"abcd", ts=2.0))  # exact retransmit
    (stream,) = reassemble_streams(packets)
    assert stream.client_bytes == b"abcd"


def test_conflicting_retransmission_first_arrival_wins():
    packets = handshake() + client_segments([b"ORIGINAL"])
    packets.append(pkt(C, S, 101, b"TAMPERED", ts=2.0))
    (stream,) = reassemble_streams(packets)
    assert stream.client_bytes == b"ORIGINAL"


def test_conflicting_out_of_order_overlap_first_buffered_wins():
    packets = handshake()
    # hole at 101..104; two different claims for offset 105..108
    packets.append(pkt(C, S, 105, b"XXXX", ts=1.0))
    packets.append(pkt(C, S, 105, b"YYYY", ts=1.1))
    packets.append(pkt(C, S, 101, b"head", ts=1.2))
    (stream,) = reassemble_streams(packets)
    assert stream.client_bytes == b"headXXXX"


def test_both_directions_assembled():
    packets = handshake()
    packets += client_segments([b"GET / HTTP/1.1\r\n\r\n"])
    packets.append(pkt(S, C, 501, b"HTTP/1.1 200 OK\r\n\r\n", ts=2.0))
    (stream,) = reassemble_streams(packets)
    assert stream.client_bytes.startswith(b"GET /")
    assert stream.server_bytes.startswith(b"HTTP/1.1 200")


def test_termination_flags():
    base = handshake() + client_segments([b"x"])
    fin = base + [pkt(C, S, 102, flags=FIN | ACK, ts=3.0)]
    rst = base + [pkt(C, S, 102, flags=RST, ts=3.0)]
    rst_server = base + [pkt(S, C, 501, flags=RST, ts=3.0)]
    assert reassemble_streams(base)[0].terminated_by == "timeout"
    assert reassemble_streams(fin)[0].terminated_by == "fin"
    (stream,) = reassemble_streams(rst)
    assert stream.terminated_by == "rst" and stream.rst_from_client
    (stream,) = reassemble_streams(rst_server)
    assert stream.terminated_by == "rst" and not stream.rst_from_client


def test_window_overflow_records_gap_and_continues():
    packets = handshake()
    packets.append(pkt(C, S, 101, b"begin", ts=1.0))
    # skip 2000 bytes, then send far more than the 1 KiB test window
    far = 101 + 5 + 2000
    filler = b"z" * 600
    for i in range(4):
        packets.append(pkt(C, S, far + i * len(filler), filler, ts=1.1 + i * 0.01))
    (stream,) = reassemble_streams(packets, window=1024)
    assert stream.client_bytes == b"begin" + filler * 4
    assert ("client", 5, 2000) in stream.gaps


def test_gap_at_flush_recorded():
    packets = handshake()
    packets.append(pkt(C, S, 101, b"begin", ts=1.0))
    packets.append(pkt(C, S, 101 + 5 + 50, b"end", ts=1.1))  # 50-byte hole
    (stream,) = reassemble_streams(packets)
    assert stream.client_bytes == b"beginend"
    assert ("client", 5, 50) in stream.gaps


def test_orientation_from_syn_ack_only():
    # handshake not captured; first packet seen is the server's SYN-ACK
    packets = [
        pkt(S, C, 500, flags=SYN | ACK, ts=0.0, ack=101),
        pkt(C, S, 101, b"req", ts=0.1),
        pkt(S, C, 501, b"resp", ts=0.2),
    ]
    (stream,) = reassemble_streams(packets)
    assert stream.flow.src_ip == C[0]
    assert stream.client_bytes == b"req"
    assert stream.server_bytes == b"resp"


def test_two_flows_separate():
    c2 = ("10.0.0.1", 40001)
    packets = handshake()
    packets += [
        pkt(c2, S, 900, flags=SYN, ts=0.5),
        pkt(c2, S, 901, b"two", ts=1.5),
    ]
    packets += client_segments([b"one"])
    streams = reassemble_streams(packets)
    assert len(streams) == 2
    by_port = {s.flow.src_port: s.client_bytes for s in streams}
    assert by_port == {40000: b"one", 40001: b"two"}


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 8), st.randoms(use_true_random=False))
def test_any_in_window_permutation_reassembles_identically(isn, n_chunks, rnd):
    message = bytes(range(48, 48 + 40)) * n_chunks
    chunk = len(message) // n_chunks
    segs = []
    offset = 0
    while offset < len(message):
        segs.append((offset, message[offset:offset + chunk]))
        offset += chunk
    base = [pkt(C, S, isn, flags=SYN, ts=0.0)]
    ordered = [
        pkt(C, S, (isn + 1 + off) % 2**32, data, ts=1.0 + i * 0.01)
        for i, (off, data) in enumerate(segs)
    ]
    shuffled = ordered[:]
    rnd.shuffle(shuffled)
    (stream,) = reassemble_streams(base + shuffled)
    assert stream.client_bytes == message
    assert stream.gaps == []
