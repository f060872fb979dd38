"""Identity-labeled frame sequences, frame sampling and landmark images.

Images are (H, W, 3) float32 arrays in [-1, 1]. Landmark images are the
rasterization of 68-point polylines, one fixed color per facial group,
1-pixel lines on a black (-1) background.

Disk layout for a dataset root:
    root/<identity_id>/<frame_idx>.png
    root/<identity_id>/<frame_idx>.landmarks.json
with the landmark JSON ``{"points": [[u, v], ...], "groups": [int, ...]}``.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image as PILImage

from . import faces
from .errors import ConfigurationError, DataError, ShapeError

VALID_RESOLUTIONS = (32, 64, 128)

# one fixed color per group, values in [0, 1] (mapped to [-1, 1] on raster)
GROUP_COLORS = {
    faces.GROUP_JAW: (1.0, 1.0, 1.0),
    faces.GROUP_BROWS: (1.0, 1.0, 0.0),
    faces.GROUP_NOSE: (0.0, 1.0, 0.0),
    faces.GROUP_EYES: (0.0, 0.5, 1.0),
    faces.GROUP_MOUTH: (1.0, 0.0, 0.0),
}

# polyline runs for the canonical 68-point topology: (start, end, closed)
_RUNS_68 = (
    (0, 17, False),    # jaw
    (17, 22, False),   # right brow
    (22, 27, False),   # left brow
    (27, 31, False),   # nose bridge
    (31, 36, False),   # nose base
    (36, 42, True),    # right eye
    (42, 48, True),    # left eye
    (48, 60, True),    # outer lips
    (60, 68, True),    # inner lips
)


@dataclass
class LandmarkSet:
    """Fixed-count landmark points in normalized [0, 1]^2 image space."""

    points: np.ndarray  # (P, 2) float64, columns (u, v)
    groups: np.ndarray  # (P,) int64

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.float64)
        self.groups = np.asarray(self.groups, dtype=np.int64)
        if self.points.ndim != 2 or self.points.shape[1] != 2:
            raise DataError(f"landmark points must be (P, 2), got {self.points.shape}")
        if self.groups.shape != (self.points.shape[0],):
            raise DataError("one group label per landmark point is required")
        if not np.isfinite(self.points).all():
            raise DataError("landmark coordinates must be finite")
        if (self.points < 0.0).any() or (self.points > 1.0).any():
            raise DataError("landmark coordinates must lie in [0, 1]^2")

    def mirrored(self) -> "LandmarkSet":
        pts = self.points.copy()
        pts[:, 0] = 1.0 - pts[:, 0]
        return LandmarkSet(points=pts, groups=self.groups.copy())


@dataclass
class IdentitySequence:
    """All frames of one identity with per-frame landmarks."""

    identity_id: str
    frames: list                 # list of (H, W, 3) float32 images in [-1, 1]
    landmarks: list              # list of LandmarkSet, same length as frames

    def __post_init__(self):
        if len(self.frames) != len(self.landmarks):
            raise DataError(
                f"identity {self.identity_id!r}: {len(self.frames)} frames but "
                f"{len(self.landmarks)} landmark sets"
            )
        shapes = {f.shape for f in self.frames}
        if len(shapes) > 1:
            raise DataError(f"identity {self.identity_id!r}: mixed frame shapes {sorted(shapes)}")

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def resolution(self) -> int:
        return self.frames[0].shape[0]


@dataclass
class SampledBatch:
    """K source (frame, landmark image) pairs plus one held-out target."""

    sources: list                        # K pairs (Image, LandmarkImage)
    target_landmark: np.ndarray
    target_truth: np.ndarray
    identity_frame_index: int            # frame index of x_{i_1}
    frame_indices: tuple = field(default=())  # K+1 sampled indices, target last

    @property
    def identity_frame(self) -> np.ndarray:
        """The conditioning frame x_{i_1} (first sampled source)."""
        return self.sources[0][0]


def generate_synthetic_identity(seed: int, n_frames: int, resolution: int) -> IdentitySequence:
    """Deterministic parametric identity: appearance fixed by seed, pose
    and expression varying smoothly across frames, landmarks analytic."""
    if resolution not in VALID_RESOLUTIONS:
        raise ConfigurationError(
            f"resolution must be one of {VALID_RESOLUTIONS}, got {resolution}"
        )
    if n_frames < 2:
        raise ConfigurationError(f"n_frames must be >= 2, got {n_frames}")

    ident = faces.FaceIdentity.from_seed(seed)
    poses = faces.pose_trajectory(seed, n_frames)
    frames, landmark_sets = [], []
    for pose in poses:
        frames.append(faces.render_face(ident, pose, resolution))
        landmark_sets.append(
            LandmarkSet(points=faces.face_landmarks(ident, pose), groups=faces.LANDMARK_GROUPS)
        )
    return IdentitySequence(identity_id=f"synth-{seed:08d}", frames=frames, landmarks=landmark_sets)


def sample_frames(seq: IdentitySequence, K: int, rng: np.random.Generator) -> SampledBatch:
    """Draw K+1 pairwise-distinct frame indices uniformly; the last one
    becomes the target and the first sampled source is the identity frame."""
    if K < 1:
        raise ConfigurationError(f"K must be >= 1, got {K}")
    if len(seq) < K + 1:
        raise DataError(
            f"identity {seq.identity_id!r} has {len(seq)} frames, need at least {K + 1}"
        )
    idx = rng.choice(len(seq), size=K + 1, replace=False)
    res = seq.resolution
    sources = [
        (seq.frames[i], rasterize_landmarks(seq.landmarks[i], res)) for i in idx[:K]
    ]
    target = int(idx[K])
    return SampledBatch(
        sources=sources,
        target_landmark=rasterize_landmarks(seq.landmarks[target], res),
        target_truth=seq.frames[target],
        identity_frame_index=int(idx[0]),
        frame_indices=tuple(int(i) for i in idx),
    )


def _bresenham(x0: int, y0: int, x1: int, y1: int):
    """Integer line rasterization; yields (x, y) pixels including endpoints."""
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
    while True:
        yield x, y
        if x == x1 and y == y1:
            return
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy


def rasterize_landmarks(lm: LandmarkSet, resolution: int) -> np.ndarray:
    """Render group polylines into an (H, W, 3) float32 image in [-1, 1].

    For the canonical 68-point topology the facial runs (jaw, brows,
    nose, eye rings, lip rings) are used; otherwise consecutive points
    sharing a group are joined. Rendering is deterministic, 1 pixel
    wide and unantialiased so repeated calls are bit-identical.
    """
    if (lm.points < 0.0).any() or (lm.points > 1.0).any():
        raise DataError("landmark points outside [0, 1]^2 cannot be rasterized")
    img = np.full((resolution, resolution, 3), -1.0, dtype=np.float32)
    # round-half-up pixel mapping keeps mirror symmetry within one pixel
    px = np.floor(lm.points * (resolution - 1) + 0.5).astype(np.int64)

    if lm.points.shape[0] == faces.N_LANDMARKS:
        runs = _RUNS_68
    else:
        runs = []
        start = 0
        for i in range(1, lm.points.shape[0] + 1):
            if i == lm.points.shape[0] or lm.groups[i] != lm.groups[start]:
                runs.append((start, i, False))
                start = i

    for start, end, closed in runs:
        color = np.array(GROUP_COLORS[int(lm.groups[start])], dtype=np.float32) * 2.0 - 1.0
        seq = list(range(start, end)) + ([start] if closed else [])
        for a, b in zip(seq[:-1], seq[1:]):
            for x, y in _bresenham(px[a, 0], px[a, 1], px[b, 0], px[b, 1]):
                img[y, x] = color
        if end - start == 1:  # isolated point
            img[px[start, 1], px[start, 0]] = color
    return img


# ---------------------------------------------------------------------------
# disk IO


def image_to_png_bytes(img: np.ndarray) -> bytes:
    import io

    q = np.clip(np.round((img + 1.0) / 2.0 * 255.0), 0, 255).astype(np.uint8)
    buf = io.BytesIO()
    PILImage.fromarray(q).save(buf, format="PNG")
    return buf.getvalue()


def save_png(img: np.ndarray, path) -> None:
    Path(path).write_bytes(image_to_png_bytes(img))


def load_png(path) -> np.ndarray:
    with PILImage.open(path) as im:
        q = np.asarray(im.convert("RGB"), dtype=np.float32)
    return q / 255.0 * 2.0 - 1.0


def save_landmarks(lm: LandmarkSet, path) -> None:
    payload = {"points": lm.points.tolist(), "groups": lm.groups.tolist()}
    Path(path).write_text(json.dumps(payload))


def load_landmarks(path) -> LandmarkSet:
    try:
        payload = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise DataError(f"missing landmark file {path}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"unparseable landmark file {path}: {exc}") from None
    return LandmarkSet(
        points=np.asarray(payload["points"], dtype=np.float64),
        groups=np.asarray(payload["groups"], dtype=np.int64),
    )


def save_dataset(sequences: list, root) -> None:
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    for seq in sequences:
        d = root / seq.identity_id
        d.mkdir(parents=True, exist_ok=True)
        for i, (frame, lm) in enumerate(zip(seq.frames, seq.landmarks)):
            save_png(frame, d / f"{i:04d}.png")
            save_landmarks(lm, d / f"{i:04d}.landmarks.json")


def _load_identity_dir(d: Path) -> IdentitySequence:
    frame_paths = sorted(d.glob("*.png"))
    if not frame_paths:
        raise DataError(f"identity directory {d} contains no frames")
    frames, lms = [], []
    for p in frame_paths:
        lm_path = p.with_name(p.stem + ".landmarks.json")
        if not lm_path.exists():
            raise DataError(f"missing landmark file {lm_path} for frame {p.name}")
        frames.append(load_png(p))
        lms.append(load_landmarks(lm_path))
    stray = len(list(d.glob("*.landmarks.json"))) - len(frames)
    if stray != 0:
        raise DataError(
            f"identity directory {d}: frame/landmark count mismatch "
            f"({len(frames)} frames, {len(frames) + stray} landmark files)"
        )
    return IdentitySequence(identity_id=d.name, frames=frames, landmarks=lms)


def load_dataset(root=None, manifest: dict | None = None) -> list:
    """Load identities either from a synthetic manifest or from disk.

    A synthetic manifest is ``{"seeds": [...], "n_frames": int,
    "resolution": int}``; otherwise every subdirectory of ``root`` is
    read as one identity.
    """
    if manifest and "seeds" in manifest:
        missing = [k for k in ("seeds", "n_frames", "resolution") if k not in manifest]
        if missing:
            raise ConfigurationError([f"synthetic manifest missing key {k!r}" for k in missing])
        return [
            generate_synthetic_identity(int(s), int(manifest["n_frames"]), int(manifest["resolution"]))
            for s in manifest["seeds"]
        ]
    if root is None:
        raise ConfigurationError("load_dataset needs a root directory or a synthetic manifest")
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"dataset root {root} is not a directory")
    dirs = sorted(p for p in root.iterdir() if p.is_dir())
    if not dirs:
        raise DataError(f"dataset root {root} contains no identity directories")
    return [_load_identity_dir(d) for d in dirs]
