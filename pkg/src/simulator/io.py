import json
import logging
from pathlib import Path

import numpy as np

from simulator.pim import Trajectory
from utils.errors import MissingHiddenDataError, TrajectoryIOError


def hidden_path_for(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".hidden.jsonl")


def save_trajectory(traj: Trajectory, path: str | Path, with_hidden: bool = False) -> list[Path]:
    """Write observations as JSON Lines, and the hidden diagnostics to a sidecar when asked.

    Returns:
        The paths written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as f:
        for t in range(traj.T):
            f.write(json.dumps({"t": t, "N": traj.N[t].tolist(), "M": traj.M[t].tolist()}) + "\n")
    written = [path]

    if with_hidden:
        traj.require_hidden()
        sidecar = hidden_path_for(path)
        with sidecar.open("w") as f:
            for t in range(traj.T):
                record = {"t": t, "C": int(traj.C[t]), "e": int(traj.e[t]), "X": traj.X[t].tolist(), "d": traj.d}
                f.write(json.dumps(record) + "\n")
        written.append(sidecar)
    logging.info("Wrote %d steps to %s", traj.T, ", ".join(str(p) for p in written))
    return written


def _read_jsonl(path: Path) -> list[dict]:
    records = []
    try:
        with path.open() as f:
            for lineno, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as e:
                    raise TrajectoryIOError(str(path), f"line {lineno}: {e.msg}") from e
    except FileNotFoundError as e:
        raise TrajectoryIOError(str(path), "no such file") from e
    for expected, record in enumerate(records):
        if record.get("t") != expected:
            raise TrajectoryIOError(str(path), f"record {expected} has t={record.get('t')}")
    return records


def load_trajectory(path: str | Path, with_hidden: bool | None = None) -> Trajectory:
    """Read a trajectory file.

    Args:
        path: Observation file
        with_hidden: True requires the sidecar, False ignores it, None loads it when present
    """
    path = Path(path)
    records = _read_jsonl(path)
    if not records:
        raise TrajectoryIOError(str(path), "no observations")
    try:
        N = np.array([r["N"] for r in records], dtype=np.int64)
        M = np.array([r["M"] for r in records], dtype=np.int64)
    except (KeyError, ValueError) as e:
        raise TrajectoryIOError(str(path), f"malformed observation record ({e})") from e
    if N.ndim != 2 or N.shape != M.shape:
        raise TrajectoryIOError(str(path), "ragged observation records")
    if np.any(M < 1) or np.any(N < 0) or np.any(N > M):
        raise TrajectoryIOError(str(path), "counts violate 0 <= N <= M, M >= 1")

    sidecar = hidden_path_for(path)
    meta = {"path": str(path), "hidden_path": str(sidecar)}
    if with_hidden is False or (with_hidden is None and not sidecar.exists()):
        return Trajectory(N=N, M=M, meta=meta)
    if not sidecar.exists():
        raise MissingHiddenDataError(str(sidecar))

    hidden = _read_jsonl(sidecar)
    if len(hidden) != len(records):
        raise TrajectoryIOError(str(sidecar), f"{len(hidden)} hidden records for {len(records)} observations")
    try:
        X = np.array([r["X"] for r in hidden], dtype=float)
        C = np.array([r["C"] for r in hidden], dtype=np.int8)
        e = np.array([r["e"] for r in hidden], dtype=np.int64)
        d = int(hidden[0]["d"])
    except (KeyError, TypeError, ValueError) as exc:
        raise TrajectoryIOError(str(sidecar), f"malformed hidden record ({exc!r})") from exc
    return Trajectory(N=N, M=M, X=X, C=C, e=e, d=d, meta=meta)
