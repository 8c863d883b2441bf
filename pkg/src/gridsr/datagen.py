"""Synthetic field generation and LR/HR pair datasets.

Fields are sums of random sinusoidal plane waves whose amplitudes fall off
as |k|^(-spectral_exponent), min-max scaled to [0, 1]; low-resolution inputs
come from box-downsampling the high-resolution field. Splits are 70/15/15
after a seeded shuffle; normalization stats come from the training split.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import GridField, NormStats, load_grid, save_grid, stats_of
from .resample import box_downsample
from .seeding import substream

_K_MIN = 1.0
_K_MAX = 32.0


@dataclass(frozen=True)
class SyntheticSpec:
    n_fields: int = 400
    h: int = 256
    w: int = 512
    factor: int = 4
    n_modes: int = 48
    spectral_exponent: float = 2.5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_fields < 1:
            raise ValueError("n_fields must be >= 1")
        if self.spectral_exponent <= 0:
            raise ValueError("spectral_exponent must be positive")
        if self.n_modes < 1:
            raise ValueError("n_modes must be >= 1")


@dataclass
class PairDataset:
    pairs: list[tuple[GridField, GridField]]  # (lr, hr)
    train_idx: list[int]
    val_idx: list[int]
    test_idx: list[int]
    stats: NormStats
    stems: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        n = len(self.pairs)
        combined = sorted(self.train_idx + self.val_idx + self.test_idx)
        if combined != list(range(n)):
            raise ValueError("splits must be disjoint and cover every pair")
        for lr, hr in self.pairs:
            if hr.height % lr.height or hr.width % lr.width:
                raise ValueError(f"hr dims {hr.shape} not a multiple of lr dims {lr.shape}")
        if not self.stems:
            self.stems = [f"{i:04d}" for i in range(n)]

    @property
    def factor(self) -> int:
        lr, hr = self.pairs[0]
        return hr.height // lr.height

    def split_pairs(self, which: str) -> list[tuple[GridField, GridField]]:
        idx = {"train": self.train_idx, "val": self.val_idx, "test": self.test_idx}[which]
        return [self.pairs[i] for i in idx]


def generate_field(spec: SyntheticSpec, index: int) -> GridField:
    """Deterministic smooth multi-scale field for (spec.seed, index), values in [0, 1]."""
    rng = substream(spec.seed, "field", str(index))
    theta = rng.uniform(0.0, 2.0 * np.pi, size=spec.n_modes)
    wavenum = rng.uniform(_K_MIN, _K_MAX, size=spec.n_modes)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=spec.n_modes)
    amp = wavenum**-spec.spectral_exponent

    ys = (np.arange(spec.h, dtype=np.float64) + 0.5) / spec.h
    xs = (np.arange(spec.w, dtype=np.float64) + 0.5) / spec.w
    yy = ys[:, None]
    xx = xs[None, :]
    vals = np.zeros((spec.h, spec.w))
    for m in range(spec.n_modes):
        proj = np.cos(theta[m]) * xx + np.sin(theta[m]) * yy
        vals += amp[m] * np.sin(2.0 * np.pi * wavenum[m] * proj + phase[m])
    lo, hi = vals.min(), vals.max()
    if hi > lo:
        vals = (vals - lo) / (hi - lo)
    else:
        vals = np.full_like(vals, 0.5)
    return GridField(vals, var_name="synthetic", units="1")


def split_sizes(n: int) -> tuple[int, int, int]:
    n_train = int(0.7 * n)
    n_val = int(0.15 * n)
    return n_train, n_val, n - n_train - n_val


def make_pairs(spec: SyntheticSpec) -> PairDataset:
    if spec.h % spec.factor or spec.w % spec.factor:
        raise ValueError(f"hr dims {spec.h}x{spec.w} not divisible by factor {spec.factor}")
    pairs = []
    for i in range(spec.n_fields):
        hr = generate_field(spec, i)
        pairs.append((box_downsample(hr, spec.factor), hr))
    perm = substream(spec.seed, "split").permutation(spec.n_fields)
    n_train, n_val, _ = split_sizes(spec.n_fields)
    train = sorted(int(i) for i in perm[:n_train])
    val = sorted(int(i) for i in perm[n_train : n_train + n_val])
    test = sorted(int(i) for i in perm[n_train + n_val :])
    stats = stats_of(pairs[i][1] for i in train)
    return PairDataset(pairs, train, val, test, stats)


def save_dataset(ds: PairDataset, root: str | Path) -> list[Path]:
    """Write <root>/lr/<stem>.gsr, <root>/hr/<stem>.gsr and manifest.txt."""
    root = Path(root)
    (root / "lr").mkdir(parents=True, exist_ok=True)
    (root / "hr").mkdir(parents=True, exist_ok=True)
    written = []
    split_name = {}
    for name, idx in (("train", ds.train_idx), ("val", ds.val_idx), ("test", ds.test_idx)):
        for i in idx:
            split_name[i] = name
    lines = []
    for i, (lr, hr) in enumerate(ds.pairs):
        stem = ds.stems[i]
        save_grid(lr, root / "lr" / f"{stem}.gsr")
        save_grid(hr, root / "hr" / f"{stem}.gsr")
        written += [root / "lr" / f"{stem}.gsr", root / "hr" / f"{stem}.gsr"]
        lines.append(f"{stem} {split_name[i]}")
    manifest = root / "manifest.txt"
    manifest.write_text("\n".join(lines) + "\n")
    written.append(manifest)
    return written


def _validate_pairs(stems, lr_fields, hr_fields):
    bad = []
    for stem, lr, hr in zip(stems, lr_fields, hr_fields):
        if hr.height % lr.height or hr.width % lr.width or (
            hr.height // lr.height != hr.width // lr.width
        ):
            bad.append(f"{stem}: lr {lr.shape} vs hr {hr.shape}")
    if bad:
        raise ValueError("dimension mismatch for: " + "; ".join(bad))


def load_pairs(lr_dir: str | Path, hr_dir: str | Path) -> PairDataset:
    """Pair up .gsr files by filename stem; unmatched stems warn and are skipped.

    Without a manifest the split is 70/15/15 over the sorted stems.
    """
    lr_dir, hr_dir = Path(lr_dir), Path(hr_dir)
    lr_stems = {p.stem: p for p in lr_dir.glob("*.gsr")}
    hr_stems = {p.stem: p for p in hr_dir.glob("*.gsr")}
    common = sorted(lr_stems.keys() & hr_stems.keys())
    for stem in sorted(lr_stems.keys() ^ hr_stems.keys()):
        side = "hr" if stem in lr_stems else "lr"
        warnings.warn(f"stem {stem!r} has no {side} counterpart; skipped", stacklevel=2)
    if not common:
        raise ValueError(f"no matching stems between {lr_dir} and {hr_dir}")
    lr_fields = [load_grid(lr_stems[s]) for s in common]
    hr_fields = [load_grid(hr_stems[s]) for s in common]
    _validate_pairs(common, lr_fields, hr_fields)
    pairs = list(zip(lr_fields, hr_fields))
    n_train, n_val, _ = split_sizes(len(pairs))
    train = list(range(n_train))
    val = list(range(n_train, n_train + n_val))
    test = list(range(n_train + n_val, len(pairs)))
    stats = stats_of(hr_fields[i] for i in train)
    return PairDataset(pairs, train, val, test, stats, stems=common)


def load_dataset(root: str | Path) -> PairDataset:
    """Load a dataset directory written by save_dataset, using its manifest splits."""
    root = Path(root)
    manifest = root / "manifest.txt"
    if not manifest.is_file():
        raise FileNotFoundError(f"missing manifest: {manifest}")
    stems, splits = [], []
    for line in manifest.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        stem, _, split = line.partition(" ")
        if split not in ("train", "val", "test"):
            raise ValueError(f"manifest line {line!r}: unknown split {split!r}")
        stems.append(stem)
        splits.append(split)
    pairs = []
    for stem in stems:
        lr = load_grid(root / "lr" / f"{stem}.gsr")
        hr = load_grid(root / "hr" / f"{stem}.gsr")
        pairs.append((lr, hr))
    _validate_pairs(stems, [p[0] for p in pairs], [p[1] for p in pairs])
    idx = {"train": [], "val": [], "test": []}
    for i, split in enumerate(splits):
        idx[split].append(i)
    if not idx["train"]:
        raise ValueError("manifest defines no training pairs")
    stats = stats_of(pairs[i][1] for i in idx["train"])
    return PairDataset(pairs, idx["train"], idx["val"], idx["test"], stats, stems=stems)
