import struct

import pytest

from netfixtures import tcp_frame, write_pcap

from isascore.errors import InputError
from isascore.net.pcap import CaptureStats, IpUserMap, load_ip_user_map, read_capture


def simple_frames(n, t0=1000.0):
    return [
        (t0 + i, tcp_frame("10.0.0.1", "93.184.216.34", 40000 + i, 80,
                           seq=i, ack=0, flags=0x18, payload=b"x" * 10))
        for i in range(n)
    ]


def test_empty_capture_yields_nothing(tmp_path):
    path = tmp_path / "empty.pcap"
    write_pcap(path, [])
    assert list(read_capture(path)) == []


def test_crafted_capture_yields_exactly_all_packets(tmp_path):
    path = tmp_path / "c.pcap"
    write_pcap(path, simple_frames(100))
    packets = list(read_capture(path))
    assert len(packets) == 100
    assert packets[0].src_ip == "10.0.0.1"
    assert packets[0].dst_port == 80
    assert packets[0].payload == b"x" * 10


def test_byte_swapped_capture_equals_native(tmp_path):
    frames = simple_frames(25)
    native, swapped = tmp_path / "n.pcap", tmp_path / "s.pcap"
    write_pcap(native, frames, endian="<")
    write_pcap(swapped, frames, endian=">")
    a = list(read_capture(native))
    b = list(read_capture(swapped))
    assert a == b


def test_raw_ip_linktype(tmp_path):
    path = tmp_path / "raw.pcap"
    frame = tcp_frame("10.0.0.1", "10.0.0.2", 1, 2, 0, 0, 0x18, b"hi",
                      ethernet=False)
    write_pcap(path, [(5.0, frame)], linktype=101)
    packets = list(read_capture(path))
    assert len(packets) == 1
    assert packets[0].payload == b"hi"


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "bad.pcap"
    path.write_bytes(b"\x00" * 64)
    with pytest.raises(InputError, match="magic"):
        list(read_capture(path))


def test_truncated_record_skipped_and_counted(tmp_path):
    path = tmp_path / "t.pcap"
    write_pcap(path, simple_frames(3))
    data = path.read_bytes()
    path.write_bytes(data[:-5])  # cut into the last packet
    stats = CaptureStats()
    packets = list(read_capture(path, stats=stats))
    assert len(packets) == 2
    assert stats.truncated == 1


def test_timestamps_preserve_microseconds(tmp_path):
    path = tmp_path / "ts.pcap"
    write_pcap(path, [(1234.567890, tcp_frame("1.2.3.4", "5.6.7.8", 1, 2, 0, 0, 0x10))])
    (pkt,) = read_capture(path)
    assert pkt.ts == pytest.approx(1234.567890, abs=1e-6)


def test_user_attribution_with_validity_windows(tmp_path):
    map_path = tmp_path / "map.csv"
    map_path.write_text(
        "ip,uid,valid_from,valid_to\n"
        "10.0.0.1,alice,0,2000\n"
        "10.0.0.1,bob,2001,\n"
        "10.0.0.9,carol,,\n"
    )
    ip_map = load_ip_user_map(map_path)
    assert ip_map.lookup("10.0.0.1", 1500) == "alice"
    assert ip_map.lookup("10.0.0.1", 3000) == "bob"
    assert ip_map.lookup("10.0.0.9", 1e9) == "carol"
    assert ip_map.lookup("10.0.0.2", 100) is None

    path = tmp_path / "attr.pcap"
    write_pcap(path, [
        (1500.0, tcp_frame("10.0.0.1", "8.8.8.8", 1, 80, 0, 0, 0x18, b"a")),
        (1500.0, tcp_frame("8.8.8.8", "10.0.0.1", 80, 1, 0, 0, 0x18, b"b")),
        (1500.0, tcp_frame("7.7.7.7", "8.8.8.8", 1, 80, 0, 0, 0x18, b"c")),
    ])
    stats = CaptureStats()
    packets = list(read_capture(path, ip_map, stats))
    assert [p.user_id for p in packets] == ["alice", "alice", None]
    assert stats.unattributed == 1


def test_bad_ip_in_map_rejected(tmp_path):
    map_path = tmp_path / "map.csv"
    map_path.write_text("notanip,u1,,\n")
    with pytest.raises(InputError, match="bad ip"):
        load_ip_user_map(map_path)


def test_non_ip_frames_counted(tmp_path):
    path = tmp_path / "arp.pcap"
    arp = b"\x02" * 6 + b"\x04" * 6 + b"\x08\x06" + b"\x00" * 28
    write_pcap(path, [(1.0, arp)] + simple_frames(1))
    stats = CaptureStats()
    packets = list(read_capture(path, stats=stats))
    assert len(packets) == 1
    assert stats.non_ip == 1
