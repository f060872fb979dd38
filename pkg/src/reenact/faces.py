"""Parametric cartoon face model with analytically known landmarks.

An identity is a set of colors and facial proportions drawn once from a
seed; a pose is a rigid placement (center, scale, rotation) plus
expression parameters. Both the rendered image and the 68 landmark
points are computed from the same parameters, so landmark ground truth
is exact by construction and no detector is involved.

Coordinates: face-local space has the origin at the face center, x to
the right, y downward, in units of image fraction at scale 1. Image
space is [0, 1]^2 with (0, 0) at the top-left.
"""

from dataclasses import dataclass, replace

import numpy as np

# 68-point landmark group ids
GROUP_JAW = 0
GROUP_BROWS = 1
GROUP_NOSE = 2
GROUP_EYES = 3
GROUP_MOUTH = 4

N_LANDMARKS = 68

# group id per point in the canonical 68-point topology
LANDMARK_GROUPS = np.concatenate([
    np.full(17, GROUP_JAW),
    np.full(10, GROUP_BROWS),
    np.full(9, GROUP_NOSE),
    np.full(12, GROUP_EYES),
    np.full(20, GROUP_MOUTH),
]).astype(np.int64)


@dataclass(frozen=True)
class FaceIdentity:
    """Per-person appearance and geometry, fixed by a seed."""

    skin: tuple
    hair: tuple
    iris: tuple
    lip: tuple
    background: tuple
    face_w: float       # head ellipse semi-axis, x
    face_h: float       # head ellipse semi-axis, y
    eye_y: float        # eye line (negative = above center)
    eye_dx: float       # half distance between eye centers
    eye_w: float        # eye semi-width
    eye_aspect: float   # eye height / width at fully open
    brow_gap: float     # distance from eye line to brow line
    brow_arch: float
    nose_len: float
    nose_w: float
    mouth_y: float
    mouth_w: float
    lip_h: float
    hair_fringe: float  # fraction of face_h above which hair covers

    @classmethod
    def from_seed(cls, seed: int) -> "FaceIdentity":
        rng = np.random.default_rng([int(seed), 0xFACE])
        u = rng.uniform

        skin_r = u(0.45, 0.95)
        skin = (skin_r, skin_r * u(0.72, 0.88), skin_r * u(0.55, 0.75))
        hair_v = u(0.05, 0.85)
        hair = (hair_v, hair_v * u(0.55, 0.95), hair_v * u(0.3, 0.8))
        iris = tuple(u(0.05, 0.75, size=3))
        lip = (min(1.0, skin[0] * u(0.95, 1.1)), skin[1] * 0.5, skin[2] * 0.5)
        background = tuple(u(0.70, 0.92, size=3))

        face_w = u(0.26, 0.32)
        face_h = u(0.34, 0.40)
        return cls(
            skin=skin,
            hair=hair,
            iris=iris,
            lip=lip,
            background=background,
            face_w=face_w,
            face_h=face_h,
            eye_y=-face_h * u(0.18, 0.30),
            eye_dx=face_w * u(0.42, 0.52),
            eye_w=face_w * u(0.17, 0.22),
            eye_aspect=u(0.50, 0.68),
            brow_gap=face_h * u(0.09, 0.14),
            brow_arch=u(0.005, 0.02),
            nose_len=face_h * u(0.30, 0.42),
            nose_w=face_w * u(0.18, 0.26),
            mouth_y=face_h * u(0.44, 0.55),
            mouth_w=face_w * u(0.36, 0.48),
            lip_h=face_h * u(0.050, 0.075),
            hair_fringe=u(0.30, 0.55),
        )


@dataclass(frozen=True)
class FacePose:
    """Rigid placement plus expression for one frame."""

    cx: float = 0.5
    cy: float = 0.5
    scale: float = 1.0
    rot: float = 0.0          # radians, positive = clockwise in image coords
    yaw: float = 0.0          # [-1, 1], shifts inner features sideways
    mouth_open: float = 0.0   # [0, 1]
    eye_open: float = 1.0     # [0.25, 1]
    brow_raise: float = 0.0   # [-1, 1]
    smile: float = 0.0        # [-1, 1]


def neutral_pose() -> FacePose:
    return FacePose()


def pose_trajectory(seed: int, n_frames: int) -> list:
    """Smooth per-frame poses: each parameter follows a seeded sinusoid."""
    rng = np.random.default_rng([int(seed), 0x905E])

    def channel(center, amp):
        a = rng.uniform(0.3, 1.0) * amp
        freq = rng.uniform(0.5, 1.5)
        phase = rng.uniform(0.0, 1.0)
        return lambda t: center + a * np.sin(2.0 * np.pi * (freq * t + phase))

    chans = {
        "cx": channel(0.5, 0.022),
        "cy": channel(0.5, 0.022),
        "scale": channel(1.0, 0.055),
        "rot": channel(0.0, 0.10),
        "yaw": channel(0.0, 0.8),
        "mouth_open": channel(0.5, 0.5),
        "eye_open": channel(0.65, 0.35),
        "brow_raise": channel(0.0, 0.8),
        "smile": channel(0.0, 0.8),
    }
    denom = max(n_frames - 1, 1)
    poses = []
    for i in range(n_frames):
        t = i / denom
        v = {k: float(f(t)) for k, f in chans.items()}
        v["mouth_open"] = float(np.clip(v["mouth_open"], 0.0, 1.0))
        v["eye_open"] = float(np.clip(v["eye_open"], 0.25, 1.0))
        poses.append(FacePose(**v))
    return poses


def _local_landmarks(ident: FaceIdentity, pose: FacePose) -> np.ndarray:
    """68 canonical points in face-local coordinates."""
    pts = np.zeros((N_LANDMARKS, 2), dtype=np.float64)
    shift = pose.yaw * ident.face_w * 0.18  # inner features track yaw

    # jaw 0..16: lower half of the head ellipse, left temple -> chin -> right temple
    phi = np.pi - np.arange(17) * (np.pi / 16.0)
    pts[0:17, 0] = ident.face_w * np.cos(phi)
    pts[0:17, 1] = ident.face_h * np.sin(phi)

    # brows 17..26
    raise_dy = pose.brow_raise * 0.025
    bx = np.linspace(-1.0, 1.0, 5)
    arch = ident.brow_arch * (1.0 - bx**2)
    brow_y = ident.eye_y - ident.brow_gap - raise_dy - arch
    pts[17:22, 0] = -ident.eye_dx + bx * ident.eye_w * 1.3 + shift
    pts[17:22, 1] = brow_y
    pts[22:27, 0] = ident.eye_dx + bx * ident.eye_w * 1.3 + shift
    pts[22:27, 1] = brow_y

    # nose 27..35: bridge then base arc
    nose_x = shift * 1.2
    bridge_y = np.linspace(ident.eye_y + 0.02, ident.eye_y + ident.nose_len, 4)
    pts[27:31, 0] = nose_x
    pts[27:31, 1] = bridge_y
    base_t = np.linspace(-1.0, 1.0, 5)
    pts[31:36, 0] = nose_x + base_t * ident.nose_w * 0.5
    pts[31:36, 1] = bridge_y[-1] + 0.02 * (1.0 - base_t**2)

    # eyes 36..47: hexagons on the eye ellipses
    eye_h = ident.eye_w * ident.eye_aspect * pose.eye_open
    hex_t = np.array([np.pi, 2 * np.pi / 3, np.pi / 3, 0.0, -np.pi / 3, -2 * np.pi / 3])
    for base, cx_sign in ((36, -1.0), (42, 1.0)):
        ex = cx_sign * ident.eye_dx + shift
        pts[base:base + 6, 0] = ex + ident.eye_w * np.cos(hex_t)
        pts[base:base + 6, 1] = ident.eye_y - eye_h * np.sin(hex_t)

    # mouth 48..67: outer ring (12) + inner ring (8)
    mx = shift * 0.8
    my = ident.mouth_y
    half_w = ident.mouth_w * (1.0 - 0.15 * pose.mouth_open)
    upper_h = ident.lip_h
    lower_h = ident.lip_h * (0.8 + 2.2 * pose.mouth_open)
    corner_dy = -pose.smile * 0.035

    outer_t = np.pi - np.arange(7) * (np.pi / 6.0)  # corners + upper arc
    pts[48:55, 0] = mx + half_w * np.cos(outer_t)
    pts[48:55, 1] = my + corner_dy * np.abs(np.cos(outer_t)) - upper_h * np.sin(outer_t)
    lower_t = np.pi - np.arange(5, 0, -1) * (np.pi / 6.0)  # right -> left along the bottom
    pts[55:60, 0] = mx + half_w * np.cos(lower_t)
    pts[55:60, 1] = my + corner_dy * np.abs(np.cos(lower_t)) + lower_h * np.sin(lower_t)

    in_w = half_w * 0.72
    open_h = ident.lip_h * (0.10 + 1.8 * pose.mouth_open)
    inner_up = np.pi - np.arange(5) * (np.pi / 4.0)
    pts[60:65, 0] = mx + in_w * np.cos(inner_up)
    pts[60:65, 1] = my - open_h * 0.5 * np.sin(inner_up)
    inner_lo = np.pi - np.arange(3, 0, -1) * (np.pi / 4.0)
    pts[65:68, 0] = mx + in_w * np.cos(inner_lo)
    pts[65:68, 1] = my + open_h * np.sin(inner_lo)

    return pts


def _to_image(pts: np.ndarray, pose: FacePose) -> np.ndarray:
    c, s = np.cos(pose.rot), np.sin(pose.rot)
    rot = np.array([[c, -s], [s, c]])
    out = pts @ rot.T * pose.scale
    out[:, 0] += pose.cx
    out[:, 1] += pose.cy
    return out


def face_landmarks(ident: FaceIdentity, pose: FacePose) -> np.ndarray:
    """Landmark points in [0, 1]^2 image space, shape (68, 2)."""
    pts = _to_image(_local_landmarks(ident, pose), pose)
    return np.clip(pts, 0.0, 1.0)


def render_face(ident: FaceIdentity, pose: FacePose, resolution: int) -> np.ndarray:
    """Render the face as an (H, W, 3) float32 image in [-1, 1]."""
    n = resolution
    jj, ii = np.meshgrid(np.arange(n), np.arange(n))
    u = jj / (n - 1)
    v = ii / (n - 1)

    # inverse similarity transform into face-local coordinates
    du = (u - pose.cx) / pose.scale
    dv = (v - pose.cy) / pose.scale
    c, s = np.cos(-pose.rot), np.sin(-pose.rot)
    x = c * du - s * dv
    y = s * du + c * dv

    img = np.empty((n, n, 3), dtype=np.float64)
    img[:] = ident.background

    def paint(mask, color):
        img[mask] = color

    def ellipse(cx, cy, rx, ry):
        return ((x - cx) / rx) ** 2 + ((y - cy) / ry) ** 2 <= 1.0

    aw, ah = ident.face_w, ident.face_h
    shift = pose.yaw * aw * 0.18

    head = ellipse(0.0, 0.0, aw, ah)
    paint(head, ident.skin)

    hair_outer = ellipse(0.0, -0.08 * ah, aw * 1.10, ah * 1.05)
    paint(hair_outer & (y <= -ah * ident.hair_fringe), ident.hair)

    # brows: thick arched strokes
    raise_dy = pose.brow_raise * 0.025
    brow_color = tuple(c * 0.45 for c in ident.hair)
    for sign in (-1.0, 1.0):
        bx0 = sign * ident.eye_dx + shift
        half = ident.eye_w * 1.3
        rel = np.clip((x - bx0) / half, -1.0, 1.0)
        by = ident.eye_y - ident.brow_gap - raise_dy - ident.brow_arch * (1.0 - rel**2)
        band = (np.abs(x - bx0) <= half) & (np.abs(y - by) <= 0.012)
        paint(band & head, brow_color)

    # eyes: sclera, iris (tracks yaw), pupil
    eye_h = ident.eye_w * ident.eye_aspect * pose.eye_open
    for sign in (-1.0, 1.0):
        ex = sign * ident.eye_dx + shift
        sclera = ellipse(ex, ident.eye_y, ident.eye_w, eye_h)
        paint(sclera, (0.96, 0.96, 0.96))
        gx = ex + pose.yaw * ident.eye_w * 0.3
        iris = ellipse(gx, ident.eye_y, ident.eye_w * 0.45, ident.eye_w * 0.45)
        paint(iris & sclera, ident.iris)
        pupil = ellipse(gx, ident.eye_y, ident.eye_w * 0.20, ident.eye_w * 0.20)
        paint(pupil & sclera, (0.05, 0.05, 0.05))

    # nose: wedge that widens toward the base, plus nostrils
    nose_x = shift * 1.2
    top_y = ident.eye_y + 0.02
    base_y = ident.eye_y + ident.nose_len
    span = np.clip((y - top_y) / (base_y - top_y), 0.0, 1.0)
    wedge = (y >= top_y) & (y <= base_y) & (np.abs(x - nose_x) <= 0.008 + span * ident.nose_w * 0.35)
    paint(wedge & head, tuple(c * 0.85 for c in ident.skin))
    for sign in (-1.0, 1.0):
        nostril = ellipse(nose_x + sign * ident.nose_w * 0.35, base_y, 0.018, 0.012)
        paint(nostril & head, tuple(c * 0.55 for c in ident.skin))

    # mouth: lip ellipse split at the lip line, dark opening scaled by mouth_open
    mx = shift * 0.8
    my = ident.mouth_y
    half_w = ident.mouth_w * (1.0 - 0.15 * pose.mouth_open)
    upper_h = ident.lip_h
    lower_h = ident.lip_h * (0.8 + 2.2 * pose.mouth_open)
    upper = ellipse(mx, my, half_w, upper_h) & (y <= my)
    lower = ellipse(mx, my, half_w, lower_h) & (y > my)
    paint((upper | lower) & head, ident.lip)
    open_h = ident.lip_h * (0.10 + 1.8 * pose.mouth_open)
    mouth_in = (((x - mx) / (half_w * 0.72)) ** 2 + ((y - my - open_h * 0.25) / (open_h * 0.75 + 1e-9)) ** 2 <= 1.0)
    paint(mouth_in & head & (open_h > 0.02), (0.15, 0.05, 0.05))

    return (img * 2.0 - 1.0).astype(np.float32)


def with_mouth_open(pose: FacePose, amount: float) -> FacePose:
    return replace(pose, mouth_open=float(amount))
