"""Packet-capture pipeline: pcap reading, TCP reassembly, TLS and HTTP
analysis, payload inspection, contextual correlation, and criteria
aggregation."""

from .pcap import IpUserMap, Packet, load_ip_user_map, read_capture
from .reassembly import Flow, TcpStream, reassemble_streams
from .findings import NetFinding, read_findings, write_findings
from .tls import TlsSession, TrustStore, detect_untrusted_cert_acceptance, load_trust_store, parse_tls_sessions
from .http import HttpTransaction, extract_device_profile, parse_http_transactions
from .dpi import scan_payloads
from .context import DomainVisit, correlate_context
from .criteria import measure_network_criteria
from .analyze import NetAnalysis, analyze_capture

__all__ = [
    "DomainVisit",
    "Flow",
    "HttpTransaction",
    "IpUserMap",
    "NetAnalysis",
    "NetFinding",
    "Packet",
    "TcpStream",
    "TlsSession",
    "TrustStore",
    "analyze_capture",
    "correlate_context",
    "detect_untrusted_cert_acceptance",
    "extract_device_profile",
    "load_ip_user_map",
    "load_trust_store",
    "measure_network_criteria",
    "parse_http_transactions",
    "parse_tls_sessions",
    "read_capture",
    "read_findings",
    "reassemble_streams",
    "scan_payloads",
    "write_findings",
]
