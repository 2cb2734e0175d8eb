"""Synthetic study generator with planted ground truth.

Builds a full desk-scale dataset: agent event logs, network findings,
questionnaire sheets, and challenge outcomes, all driven by a per-user
latent awareness value theta in [0, 1].  Reckless event rates scale with
(1 - theta), cautious indicators with theta, and challenge success is
Bernoulli with a logistic link of configurable steepness.  Every planted
raw criterion value is recorded in a manifest so pipelines can be checked
against ground truth.  Output is deterministic for a given seed: each user
draws from an independent stream seeded by (seed, user id).

The emitted directory also contains the reputation DB, version table, and
uniform awareness models the dataset was built against, plus a ready-to-use
run configuration.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import CATALOG
from .errors import InputError
from .models import AttackClass, AwarenessModel, save_model, uniform_model
from .questionnaire import QuestionMap, load_question_map, orient

SYNTH_START_TS = 1_700_000_000.0  # mid-November 2023
DAY = 86400.0

DEFAULT_RATES = {
    "malicious_visits": 6.0,
    "ad_visits": 8.0,
    "benign_visits": 10.0,
    "http_downloads": 4.0,
    "untrusted_cert_visits": 3.0,
    "spam_opened": 5.0,
    "sms_links": 4.0,
    "pii_transmissions": 3.0,
    "popup_pii": 2.0,
    "apk_downloads": 2.0,
    "app_deletions": 4.0,
}

REPUTATION_ROWS = [
    "malware.test,malware,",
    "phish.test,phishing,",
    "spamly.test,spam,",
    "ads.test,ads,ad-click-tracker",
    "mail.test,,email-service",
    "av-vendor.test,,antivirus-vendor",
    "passkeeper.test,,password-manager",
    "store.test,,app-store-official",
    "apkmirror.test,,app-store-unofficial",
    "news.test,,news",
]

VERSION_ROWS = ["2010-01-01,9", "2015-06-01,11"]
OS_CURRENT = "11"
OS_STALE = "9"

CHALLENGES = ("phishing", "spam", "permissions", "certificate")


@dataclass
class SynthSpec:
    n_users: int = 200
    steepness: float = 8.0
    days: float = 28.0
    start_ts: float = SYNTH_START_TS
    theta_dist: str = "uniform"  # uniform | beta | fixed
    theta_a: float = 2.0
    theta_b: float = 2.0
    theta_value: float = 0.5
    questionnaire_noise: float = 1.2
    mobile_rate: float = 0.95
    rates: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_users < 1:
            raise InputError("n_users must be at least 1")
        if self.steepness < 0:
            raise InputError("steepness must be nonnegative")
        if self.days <= 0:
            raise InputError("days must be positive")
        if self.theta_dist not in ("uniform", "beta", "fixed"):
            raise InputError(f"unknown theta distribution {self.theta_dist!r}")
        if self.theta_dist == "fixed" and not 0 <= self.theta_value <= 1:
            raise InputError("fixed theta must lie in [0,1]")
        if not 0 <= self.mobile_rate <= 1:
            raise InputError("mobile_rate must lie in [0,1]")
        unknown = set(self.rates) - set(DEFAULT_RATES)
        if unknown:
            raise InputError(f"unknown rate keys: {sorted(unknown)}")
        if any(v < 0 for v in self.rates.values()):
            raise InputError("rates must be nonnegative")

    @classmethod
    def from_dict(cls, obj: dict) -> "SynthSpec":
        theta = obj.get("theta", {})
        known = {
            "n_users": obj.get("n_users", 200),
            "steepness": obj.get("steepness", 8.0),
            "days": obj.get("days", 28.0),
            "start_ts": obj.get("start_ts", SYNTH_START_TS),
            "theta_dist": theta.get("dist", "uniform"),
            "theta_a": theta.get("a", 2.0),
            "theta_b": theta.get("b", 2.0),
            "theta_value": theta.get("value", 0.5),
            "questionnaire_noise": obj.get("questionnaire_noise", 1.2),
            "mobile_rate": obj.get("mobile_rate", 0.95),
            "rates": obj.get("rates", {}),
        }
        extra = set(obj) - {"n_users", "steepness", "days", "start_ts", "theta",
                            "questionnaire_noise", "mobile_rate", "rates"}
        if extra:
            raise InputError(f"unknown spec keys: {sorted(extra)}")
        return cls(**known)


@dataclass
class SynthDataset:
    spec: SynthSpec
    seed: int
    agent_events: list[dict]
    net_findings: list[dict]
    questionnaire_header: list[str]
    questionnaire_rows: list[list]
    outcomes: list[tuple[str, str, str, int]]
    manifest: dict


def _poisson(rng: random.Random, lam: float) -> int:
    if lam <= 0:
        return 0
    limit = math.exp(-lam)
    k = 0
    p = 1.0
    while True:
        p *= rng.random()
        if p <= limit:
            return k
        k += 1


def _logistic(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x))


def _draw_theta(rng: random.Random, spec: SynthSpec) -> float:
    if spec.theta_dist == "fixed":
        return spec.theta_value
    if spec.theta_dist == "beta":
        return rng.betavariate(spec.theta_a, spec.theta_b)
    return rng.random()


class _UserBuilder:
    """Generates one user's events, findings, and ground-truth tallies."""

    def __init__(self, uid: str, theta: float, rng: random.Random,
                 spec: SynthSpec, qmap: QuestionMap):
        self.uid = uid
        self.theta = theta
        self.rng = rng
        self.spec = spec
        self.qmap = qmap
        self.t0 = spec.start_ts
        self.t1 = spec.start_ts + spec.days * DAY
        self.events: list[dict] = []
        self.findings: list[dict] = []
        self.agent_raw: dict[str, float] = {}
        self.net_raw: dict[str, float] = {}

    def rate(self, key: str) -> float:
        return self.spec.rates.get(key, DEFAULT_RATES[key])

    def _emit(self, ts: float, kind: str, payload: dict) -> None:
        self.events.append({"uid": self.uid, "ts": ts, "kind": kind, "payload": payload})

    def _find(self, ts: float, criterion: str, detail: str) -> None:
        self.findings.append({
            "uid": self.uid, "ts": ts, "criterion": criterion,
            "detail": detail, "flow": f"synth-{self.uid}",
        })

    # -- agent side -----------------------------------------------------

    def build(self) -> None:
        rng, theta = self.rng, self.theta
        reckless = 1.0 - theta

        self._emit(self.t0, "hardware", {"model": "Pixel 4", "brand": "Google"})

        av_present = rng.random() < 0.9 * theta
        pm_present = rng.random() < 0.75 * theta
        vpn_present = rng.random() < 0.6 * theta
        self._apps(av_present, pm_present, vpn_present)

        open_slots = self._wifi_schedule()
        self._bluetooth()
        visit_counts = self._browsing(open_slots)
        self._email(visit_counts)
        self._sms()
        self._device()
        self._network_mirror(av_present, pm_present, visit_counts)
        self._emit(self.t1, "software", {
            "os_version": self._os_version, "build": "QQ3A.200805.001",
        })

    def _apps(self, av, pm, vpn) -> None:
        rng, theta = self.rng, self.theta
        reckless = 1.0 - theta
        birth = self.t0 - 300 * DAY
        apps = []
        for i in range(40):  # vendor burst, one install per minute
            apps.append({
                "package": f"com.vendor.sys{i:02d}", "install_time": birth + 60.0 * i,
                "source": "official-store", "permissions": [], "rating": None,
                "downloads": None, "requires_root": False, "av_flagged": False,
                "up_to_date": True,
            })
        n_user = 8 + int(17 * rng.random())
        first_user = birth + 30 * DAY
        span = self.t1 - first_user
        tally = {"AI1": 0, "AI2": 0, "AI3": 0, "AI4": 0,
                 "known_state": 0, "stale": 0}
        user_apps = []
        for j in range(n_user):
            unofficial = rng.random() < 0.5 * reckless
            flagged = rng.random() < 0.15 * reckless
            rating_known = rng.random() < 0.9
            low = rng.random() < 0.6 * reckless
            rating = None
            if rating_known:
                rating = 2.0 + 1.4 * rng.random() if low else 3.5 + 1.5 * rng.random()
            dangerous = rng.random() < 0.5 * reckless
            root = rng.random() < 0.2 * reckless
            state_known = rng.random() < 0.95
            current = rng.random() < (0.3 + 0.7 * theta)
            user_apps.append({
                "package": f"com.app.{self.uid}.n{j}",
                "install_time": first_user + span * (j / max(n_user, 1)),
                "source": "unofficial" if unofficial else "official-store",
                "permissions": ["android.permission.READ_CONTACTS"] if dangerous
                               else ["android.permission.INTERNET"],
                "rating": rating,
                "downloads": 1000 + j,
                "requires_root": root,
                "av_flagged": flagged,
                "up_to_date": current if state_known else None,
            })
            tally["AI1"] += 1 if (unofficial or flagged) else 0
            tally["AI2"] += 1 if (rating_known and low and dangerous) else 0
            tally["AI3"] += 1 if (rating_known and low) else 0
            tally["AI4"] += 1 if root else 0
            if state_known:
                tally["known_state"] += 1
                tally["stale"] += 0 if current else 1

        security = []
        if av:
            security.append("com.avast.mobilesecurity")
        if pm:
            security.append("com.lastpass.lpandroid")
        if vpn:
            security.append("net.openvpn.openvpn")
        for k, package in enumerate(security):
            user_apps.append({
                "package": package,
                "install_time": first_user + DAY * (k + 1) + 1.0,
                "source": "official-store",
                "permissions": ["android.permission.INTERNET"],
                "rating": 4.5, "downloads": 500000, "requires_root": False,
                "av_flagged": False, "up_to_date": True,
            })
            tally["known_state"] += 1

        user_apps.sort(key=lambda a: a["install_time"])
        apps.extend(user_apps)
        self._emit(self.t1 - 1.0, "installed_apps", {"apps": apps})

        self.agent_raw["AI1"] = float(tally["AI1"])
        self.agent_raw["AI2"] = float(tally["AI2"])
        self.agent_raw["AI3"] = float(tally["AI3"])
        self.agent_raw["AI4"] = float(tally["AI4"])
        if tally["known_state"]:
            self.agent_raw["AH1"] = tally["stale"] / tally["known_state"]
        self.agent_raw["SS2"] = 1.0 if av else 0.0
        self.agent_raw["A3"] = 1.0 if pm else 0.0
        self.agent_raw["N3"] = 1.0 if vpn else 0.0
        if security:
            self.agent_raw["SS3"] = 1.0

        deletions = _poisson(rng, self.rate("app_deletions") * theta)
        for d in range(deletions):
            self._emit(self.t0 + DAY * (2 + d % 20) + 3600.0 * d, "app_change",
                       {"action": "delete", "package": f"com.app.{self.uid}.old{d}"})
        self.agent_raw["AH3"] = float(deletions)

    def _wifi_schedule(self) -> list[int]:
        rng = self.rng
        reckless = 1.0 - self.theta
        self._n_slots = 10
        self._slot_len = (self.t1 - self.t0) / self._n_slots
        open_slots = []
        for i in range(self._n_slots):
            ts = self.t0 + i * self._slot_len
            is_open = rng.random() < 0.55 * reckless
            if is_open:
                open_slots.append(i)
            self._emit(ts, "wifi_change", {
                "ssid": f"net-{i}", "bssid": f"aa:bb:cc:00:00:{i:02x}",
                "security": "open" if is_open else "wpa2",
            })
        self.agent_raw["N1"] = float(len(open_slots))
        self._open_slots = set(open_slots)
        return open_slots

    def _slot_time(self, slot: int) -> float:
        return self.t0 + (slot + 0.1 + 0.8 * self.rng.random()) * self._slot_len

    def _safe_slot(self) -> int:
        secure = [i for i in range(self._n_slots) if i not in self._open_slots]
        pool = secure if secure else list(range(self._n_slots))
        return pool[int(self.rng.random() * len(pool))] % self._n_slots

    def _bluetooth(self) -> None:
        rng = self.rng
        reckless = 1.0 - self.theta
        fraction = 0.7 * reckless
        gps_always = rng.random() < 0.6 * reckless
        on_ts = self.t0
        off_ts = self.t0 + fraction * (self.t1 - self.t0)
        self._emit(on_ts, "bluetooth_change", {
            "bluetooth_on": fraction > 0, "nfc_on": False,
            "gps_on": gps_always, "connected_devices": 0,
        })
        self._emit(off_ts, "bluetooth_change", {
            "bluetooth_on": False, "nfc_on": False,
            "gps_on": gps_always, "connected_devices": 0,
        })
        idle = (off_ts - on_ts) if fraction > 0 else 0.0
        self.agent_raw["PC1"] = idle / (self.t1 - self.t0) + (1.0 if gps_always else 0.0)

    def _visit(self, ts, domain, scheme="https", download=False, pii=False,
               url=None) -> None:
        self._emit(ts, "browser_visit", {
            "url": url or f"{scheme}://{domain}/",
            "domain": domain, "scheme": scheme,
            "untrusted_cert": False, "is_download": download,
            "sent_private_data": pii,
        })

    def _browsing(self, open_slots) -> dict[str, list[float]]:
        rng = self.rng
        reckless = 1.0 - self.theta
        counts: dict[str, list[float]] = {
            "malicious": [], "ads": [], "downloads": [], "untrusted": [],
        }
        n2 = 0
        n4 = 0

        # one guaranteed benign visit keeps browser criteria measured
        self._visit(self._slot_time(self._safe_slot()), "www.news.test")
        for _ in range(_poisson(rng, self.rate("benign_visits"))):
            self._visit(self._slot_time(self._safe_slot()), "www.news.test")

        for i in range(_poisson(rng, self.rate("malicious_visits") * reckless)):
            ts = self._slot_time(self._safe_slot())
            domain = "evil.malware.test" if i % 2 == 0 else "login.phish.test"
            self._visit(ts, domain)
            counts["malicious"].append(ts)
        for _ in range(_poisson(rng, self.rate("ad_visits") * reckless)):
            ts = self._slot_time(self._safe_slot())
            self._visit(ts, "t.ads.test")
            counts["ads"].append(ts)
        for _ in range(_poisson(rng, self.rate("http_downloads") * reckless)):
            slot = self._safe_slot()
            ts = self._slot_time(slot)
            self._visit(ts, "files.news.test", scheme="http", download=True)
            counts["downloads"].append(ts)
            if slot in self._open_slots:
                n2 += 1
        for _ in range(_poisson(rng, self.rate("untrusted_cert_visits") * reckless)):
            ts = self._slot_time(self._safe_slot())
            self._emit(ts, "browser_visit", {
                "url": "https://selfsigned.test/", "domain": "selfsigned.test",
                "scheme": "https", "untrusted_cert": True,
                "is_download": False, "sent_private_data": False,
            })
            counts["untrusted"].append(ts)

        for slot in open_slots:
            if rng.random() < 0.5 * reckless:
                ts = self._slot_time(slot)
                self._visit(ts, "files.news.test", scheme="http", download=True)
                counts["downloads"].append(ts)
                n2 += 1
            if rng.random() < 0.35 * reckless:
                self._visit(self._slot_time(slot), "forms.news.test",
                            scheme="http", pii=True)
                n4 += 1

        self.agent_raw["B1"] = float(len(counts["malicious"]))
        self.agent_raw["AH2"] = float(len(counts["ads"]))
        self.agent_raw["B2"] = float(len(counts["downloads"]))
        self.agent_raw["B5"] = float(len(counts["untrusted"]))
        self.agent_raw["N2"] = float(n2)
        self.agent_raw["N4"] = float(n4)
        return counts

    def _email(self, visit_counts) -> None:
        n_spam = _poisson(self.rng, self.rate("spam_opened") * (1.0 - self.theta))
        thirds = [n_spam // 3, n_spam // 3, n_spam - 2 * (n_spam // 3)]
        for i, opened in enumerate(thirds):
            self._emit(self.t0 + DAY * (2 + 10 * i), "email_stats", {
                "received": 40 + i, "sent": 5, "spam_received": opened + 2,
                "spam_opened": opened,
            })
        self.agent_raw["VC1"] = float(n_spam)
        self._n_spam = n_spam

    def _sms(self) -> None:
        rng = self.rng
        reckless = 1.0 - self.theta
        followed = 0
        n_links = _poisson(rng, self.rate("sms_links"))
        for i in range(n_links):
            ts = self.t0 + DAY * (1 + (i * 5) % 25) + 600.0 * i
            link = f"http://sms-link.test/{self.uid}/{i}"
            self._emit(ts, "sms", {
                "sender": f"+1555{i:07d}", "known_sender": False,
                "links": [link], "auth_code": False,
            })
            if rng.random() < 0.75 * reckless:
                self._visit(ts + 120.0, "sms-link.test", scheme="http", url=link)
                followed += 1
        has_auth = rng.random() < 0.85 * self.theta
        self._emit(self.t0 + DAY * 3 + 42.0, "sms", {
            "sender": "BANK", "known_sender": True, "links": [],
            "auth_code": has_auth,
        })
        self.agent_raw["VC2"] = float(followed)
        self.agent_raw["A2"] = 1.0 if has_auth else 0.0
        self._followed_links = followed

    def _device(self) -> None:
        rng, theta = self.rng, self.theta
        os_current = rng.random() < (0.15 + 0.85 * theta)
        rooted = rng.random() < 0.4 * (1.0 - theta)
        secure_lock = rng.random() < (0.1 + 0.9 * theta)
        self._os_version = OS_CURRENT if os_current else OS_STALE
        self._os_current = os_current
        self._emit(self.t0 + DAY, "root_check", {"rooted": rooted})
        self._emit(self.t0 + DAY + 60.0, "screen_lock",
                   {"type": "pin" if secure_lock else "none"})
        self.agent_raw["OS1"] = 1.0 if os_current else 0.0
        self.agent_raw["OS2"] = 1.0 if rooted else 0.0
        self.agent_raw["SS5"] = 1.0 if secure_lock else 0.0

    # -- network side ----------------------------------------------------

    def _network_mirror(self, av_present, pm_present, visit_counts) -> None:
        rng = self.rng
        reckless = 1.0 - self.theta
        for ts in visit_counts["malicious"]:
            self._find(ts, "B1", "visit to malicious domain")
        for ts in visit_counts["ads"]:
            self._find(ts, "AH2", "ad-click-tracker visit")
        for ts in visit_counts["downloads"]:
            self._find(ts, "B2", "http download")
        for ts in visit_counts["untrusted"]:
            self._find(ts, "B5", "accepted untrusted certificate")
        for i in range(self._n_spam):
            self._find(self.t0 + DAY * (3 + (i * 2) % 20), "VC1",
                       "spam domain near email activity")
        for i in range(self._followed_links):
            self._find(self.t0 + DAY * (1 + (i * 5) % 25) + 720.0, "VC2",
                       "malicious domain near email activity")
        n_b3 = _poisson(rng, self.rate("pii_transmissions") * reckless)
        for i in range(n_b3):
            self._find(self.t0 + DAY * (4 + (i * 3) % 20), "B3", "plaintext personal data")
        n_b4 = _poisson(rng, self.rate("popup_pii") * reckless)
        for i in range(n_b4):
            self._find(self.t0 + DAY * (5 + (i * 3) % 20), "B4",
                       "personal data near ad-tracker activity")
        n_apk = _poisson(rng, self.rate("apk_downloads") * reckless)
        for i in range(n_apk):
            self._find(self.t0 + DAY * (6 + (i * 3) % 20), "AI1",
                       "apk download from unofficial store")
        if av_present:
            for d in range(4):
                self._find(self.t0 + DAY * (1 + d) + 30.0, "SS2", "antivirus vendor contact")
                self._find(self.t0 + DAY * (1 + d) + 30.0, "SS3", "antivirus vendor contact")
        if pm_present:
            for d in range(4):
                self._find(self.t0 + DAY * (1 + d) + 90.0, "A3", "password manager contact")
        self._find(self.t1 - 2.0, "OS1",
                   "up-to-date" if self._os_current else "outdated")

        self.net_raw = {
            "B1": float(len(visit_counts["malicious"])),
            "B2": float(len(visit_counts["downloads"])),
            "B3": float(n_b3),
            "B4": float(n_b4),
            "B5": float(len(visit_counts["untrusted"])),
            "VC1": float(self._n_spam),
            "VC2": float(self._followed_links),
            "AH2": float(len(visit_counts["ads"])),
            "AI1": float(n_apk),
            "SS2": 1.0 if av_present else 0.0,
            "SS3": 1.0 if av_present else 0.0,
            "A3": 1.0 if pm_present else 0.0,
            "OS1": 1.0 if self._os_current else 0.0,
        }

    # -- questionnaire and outcomes ---------------------------------------

    def questionnaire_row(self) -> tuple[list[int], dict[str, float]]:
        rng, theta = self.rng, self.theta
        answers = []
        per_criterion: dict[str, list[int]] = {}
        for entry in self.qmap.entries:
            target = 1.0 + 4.0 * theta + rng.gauss(0.0, self.spec.questionnaire_noise)
            oriented = int(min(5, max(1, round(target))))
            answers.append(6 - oriented if entry.reverse_coded else oriented)
            for cid in entry.criteria:
                per_criterion.setdefault(cid, []).append(oriented)
        raws = {cid: sum(v) / len(v) for cid, v in per_criterion.items()}
        return answers, raws

    def outcomes(self) -> list[tuple[str, str, str, int]]:
        rng = self.rng
        p = _logistic(self.spec.steepness * (self.theta - 0.5))
        rows = []
        for challenge in CHALLENGES:
            result = "success" if rng.random() < p else "fail"
            mobile = 1 if rng.random() < self.spec.mobile_rate else 0
            rows.append((self.uid, challenge, result, mobile))
        return rows


def generate_synthetic_population(spec: SynthSpec, seed: int) -> SynthDataset:
    """Generate the full dataset for a spec and seed."""
    qmap = load_question_map()
    agent_events: list[dict] = []
    net_findings: list[dict] = []
    quest_rows: list[list] = []
    outcome_rows: list[tuple[str, str, str, int]] = []
    manifest_users: dict[str, dict] = {}

    for i in range(spec.n_users):
        uid = f"u{i + 1:04d}"
        rng = random.Random(f"{seed}:{uid}")
        theta = _draw_theta(rng, spec)
        builder = _UserBuilder(uid, theta, rng, spec, qmap)
        builder.build()
        answers, quest_raw = builder.questionnaire_row()
        agent_events.extend(builder.events)
        net_findings.extend(builder.findings)
        quest_rows.append([uid] + answers)
        outcome_rows.extend(builder.outcomes())
        manifest_users[uid] = {
            "theta": theta,
            "agent": builder.agent_raw,
            "network": builder.net_raw,
            "questionnaire": quest_raw,
        }

    agent_events.sort(key=lambda e: (e["ts"], e["uid"], e["kind"]))
    net_findings.sort(key=lambda f: (f["uid"], f["ts"], f["criterion"]))
    manifest = {
        "seed": seed,
        "spec": {
            "n_users": spec.n_users, "steepness": spec.steepness,
            "days": spec.days, "start_ts": spec.start_ts,
            "theta_dist": spec.theta_dist,
            "questionnaire_noise": spec.questionnaire_noise,
            "mobile_rate": spec.mobile_rate,
        },
        "users": manifest_users,
    }
    return SynthDataset(
        spec=spec,
        seed=seed,
        agent_events=agent_events,
        net_findings=net_findings,
        questionnaire_header=["uid"] + list(qmap.question_ids),
        questionnaire_rows=quest_rows,
        outcomes=outcome_rows,
        manifest=manifest,
    )


def write_dataset(ds: SynthDataset, outdir) -> None:
    """Write the dataset tree, including the supporting reference files."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    with open(outdir / "agent_events.jsonl", "w", encoding="utf-8") as fh:
        for ev in ds.agent_events:
            fh.write(json.dumps(ev, sort_keys=True) + "\n")
    with open(outdir / "network_findings.jsonl", "w", encoding="utf-8") as fh:
        for f in ds.net_findings:
            fh.write(json.dumps(f, sort_keys=True) + "\n")
    with open(outdir / "questionnaire.csv", "w", encoding="utf-8") as fh:
        fh.write(",".join(ds.questionnaire_header) + "\n")
        for row in ds.questionnaire_rows:
            fh.write(",".join(str(c) for c in row) + "\n")
    with open(outdir / "outcomes.csv", "w", encoding="utf-8") as fh:
        fh.write("uid,challenge,result,mobile\n")
        for uid, challenge, result, mobile in ds.outcomes:
            fh.write(f"{uid},{challenge},{result},{mobile}\n")
    (outdir / "manifest.json").write_text(
        json.dumps(ds.manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    (outdir / "reputation.csv").write_text("\n".join(REPUTATION_ROWS) + "\n")
    (outdir / "version_table.csv").write_text("\n".join(VERSION_ROWS) + "\n")
    models_dir = outdir / "models"
    models_dir.mkdir(exist_ok=True)
    for ac in AttackClass:
        save_model(uniform_model(ac), models_dir / f"{ac.value}.model")

    # paths are relative to the config file, so the dataset tree is portable
    config = {
        "paths": {
            "models": {ac.value: f"models/{ac.value}.model" for ac in AttackClass},
            "reputation_db": "reputation.csv",
            "version_table": "version_table.csv",
        },
        "params": {"beta": 0.5},
        "output_dir": "out",
    }
    (outdir / "config.json").write_text(json.dumps(config, indent=2) + "\n")
