import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from isascore.reputation import ReputationDb, load_reputation_db


@pytest.fixture
def reputation_db(tmp_path) -> ReputationDb:
    rows = [
        "evil.example,malware,",
        "phish.example,phishing,",
        "spam.example,spam,",
        "tracker.example,ads,ad-click-tracker",
        "mail.example,,email-service",
        "av.example,,antivirus-vendor",
        "vault.example,,password-manager",
        "apk.example,,app-store-unofficial",
        "play.example,,app-store-official",
        "news.example,,news",
    ]
    path = tmp_path / "reputation.csv"
    path.write_text("\n".join(rows) + "\n")
    return load_reputation_db(path)


@pytest.fixture
def version_table_file(tmp_path):
    path = tmp_path / "versions.csv"
    path.write_text("2010-01-01,9\n2015-06-01,11\n")
    return path
