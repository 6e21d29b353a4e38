"""Report files, run manifests, and atomic output writing.

Reports are JSON (summary, comparison) and CSV (per-venue results,
histogram bins). Floats are serialized with Python's shortest
round-trip ``repr``, JSON keys are sorted, and CSV rows follow the
input venue order, so identical runs produce byte-identical report
files.

Every output file names the manifest hash that produced it: CSV files
carry a leading ``# manifest_sha256: ...`` comment, JSON files a
``manifest_sha256`` key. The hash covers the deterministic manifest
payload (tool version, input digests, resolved parameters, scenario
configs); the run timestamp is stored in the manifest but excluded from
the hash so reruns on identical inputs stay comparable.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping

from .epi import EpiParams, VenueResult
from .ingest import Venue
from .scenario import ScenarioConfig
from .stats import Histogram

TOOL_VERSION = "0.1.0"

VENUE_RESULT_COLUMNS = (
    "venue_id",
    "name",
    "category",
    "area_m2",
    "volume_m3",
    "weekly_infections",
    "severity",
)


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record for one CLI run."""

    tool_version: str
    input_file_digests: dict[str, str]
    resolved_params: dict
    scenario_configs: list
    timestamp: str

    def hash_payload(self) -> dict:
        """The deterministic portion of the manifest (everything but the timestamp)."""
        return {
            "tool_version": self.tool_version,
            "input_file_digests": self.input_file_digests,
            "resolved_params": self.resolved_params,
            "scenario_configs": self.scenario_configs,
        }

    @property
    def manifest_hash(self) -> str:
        return hashlib.sha256(canonical_json(self.hash_payload()).encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        return {**self.hash_payload(), "timestamp": self.timestamp, "manifest_sha256": self.manifest_hash}


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def build_manifest(
    input_paths: Iterable[str | Path],
    params: EpiParams | None,
    scenario_configs: Iterable[ScenarioConfig],
    timestamp: str | None = None,
) -> RunManifest:
    """Assemble the manifest for a run over the given input files."""
    digests = {str(p): sha256_file(p) for p in sorted(set(str(p) for p in input_paths))}
    return RunManifest(
        tool_version=TOOL_VERSION,
        input_file_digests=digests,
        resolved_params=dataclasses.asdict(params) if params is not None else {},
        scenario_configs=[_config_to_dict(c) for c in scenario_configs],
        timestamp=timestamp if timestamp is not None else utc_now_iso(),
    )


def _config_to_dict(config: ScenarioConfig) -> dict:
    return {
        "name": config.name,
        "visit_source": config.visit_source,
        "sampling_factor": config.sampling_factor,
        "spacing": config.spacing,
        "params_override": dict(config.params_override),
    }


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a temp file + rename so partial outputs never survive."""
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def venue_results_csv(
    results: Mapping[str, VenueResult],
    venues: Mapping[str, Venue],
    manifest_hash: str,
) -> str:
    """Render the per-venue report CSV (one row per venue, input order)."""
    buf = io.StringIO()
    buf.write(f"# manifest_sha256: {manifest_hash}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(VENUE_RESULT_COLUMNS)
    for venue_id, result in results.items():
        venue = venues[venue_id]
        writer.writerow(
            [
                venue_id,
                venue.name,
                venue.category,
                repr(venue.area),
                repr(venue.volume) if venue.volume is not None else "",
                repr(result.weekly_infections),
                result.severity.value,
            ]
        )
    return buf.getvalue()


def histogram_csv(hist: Histogram, manifest_hash: str) -> str:
    """Render plot-ready histogram bins with provenance comments."""
    buf = io.StringIO()
    buf.write(f"# manifest_sha256: {manifest_hash}\n")
    buf.write(f"# scale: {hist.scale.value}, excluded_count: {hist.excluded_count}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["bin_lo", "bin_hi", "count"])
    for i, count in enumerate(hist.counts):
        writer.writerow([repr(hist.bin_edges[i]), repr(hist.bin_edges[i + 1]), count])
    return buf.getvalue()
