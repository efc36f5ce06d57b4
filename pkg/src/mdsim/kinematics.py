"""Hierarchical 13-scatterer human model and the 12 activity motion programs.

The body is a kinematic chain of 13 point scatterers rooted at the torso.
Each child joint sits at its parent's position plus a link vector rotated by
the composition of a global yaw (in-place body twist), a global pitch (whole
body tipping over for fall/get-up activities) and the accumulated local
y-axis joint rotations along the chain from the root.  All angle programs are
closed-form functions of time, so poses can be evaluated at any instant and
in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

REFERENCE_HEIGHT_M = 1.8
REFERENCE_WEIGHT_KG = 84.24

# Joint indices (table order).
TORSO, HEAD = 0, 1
R_SHOULDER, R_ELBOW, R_HAND = 2, 3, 4
L_SHOULDER, L_ELBOW, L_HAND = 5, 6, 7
HIP, R_KNEE, R_ANKLE, L_KNEE, L_ANKLE = 8, 9, 10, 11, 12

# (name, parent index, link vector in parent frame at 1.8 m height, RCS in m^2
# at the reference height/weight).  x = range, y = cross-range, z = height.
_JOINT_TABLE = (
    ("torso", None, (0.0, 0.0, 0.0), 1.0),
    ("head", TORSO, (0.0, 0.0, 0.3), 0.5),
    ("r_shoulder", TORSO, (0.0, -0.2, 0.2), 0.1),
    ("r_elbow", R_SHOULDER, (0.0, 0.0, -0.3), 0.3),
    ("r_hand", R_ELBOW, (0.0, 0.0, -0.3), 0.2),
    ("l_shoulder", TORSO, (0.0, 0.2, 0.2), 0.1),
    ("l_elbow", L_SHOULDER, (0.0, 0.0, -0.3), 0.3),
    ("l_hand", L_ELBOW, (0.0, 0.0, -0.3), 0.2),
    ("hip", TORSO, (0.0, 0.0, -0.3), 0.1),
    ("r_knee", HIP, (0.0, 0.0, -0.45), 0.4),
    ("r_ankle", R_KNEE, (0.0, 0.0, -0.45), 0.3),
    ("l_knee", HIP, (0.0, 0.0, -0.45), 0.4),
    ("l_ankle", L_KNEE, (0.0, 0.0, -0.45), 0.3),
)

# Root-to-joint index chains, used to accumulate local rotations.
_CHAINS: list[tuple[int, ...]] = []
for _i, (_, _parent, _, _) in enumerate(_JOINT_TABLE):
    if _parent is None:
        _CHAINS.append((_i,))
    else:
        _CHAINS.append(_CHAINS[_parent] + (_i,))


class Activity(Enum):
    """The 12 supported activities, labelled S1..S12."""

    S1 = "stationary"
    S2 = "punching"
    S3 = "kicking"
    S4 = "grabbing"
    S5 = "sitting_down"
    S6 = "standing_up"
    S7 = "body_rotating"
    S8 = "walking"
    S9 = "sitting_to_walking"
    S10 = "walking_to_sitting"
    S11 = "falling_to_walking"
    S12 = "walking_to_falling"

    @classmethod
    def parse(cls, label) -> "Activity":
        """Accept an Activity, an 'S1'..'S12' label or a descriptive name."""
        if isinstance(label, Activity):
            return label
        if isinstance(label, str):
            key = label.strip()
            if key.upper() in cls.__members__:
                return cls[key.upper()]
            for member in cls:
                if member.value == key.lower():
                    return member
        raise ValueError(f"unknown activity {label!r} (expected S1..S12)")

    @property
    def translates(self) -> bool:
        """True for activities whose torso moves across the scene."""
        return self in (Activity.S8, Activity.S9, Activity.S10,
                        Activity.S11, Activity.S12)


@dataclass(frozen=True)
class JointSpec:
    """One scatterer of the body model."""

    name: str
    parent: int | None
    link: np.ndarray  # meters, in the parent frame
    rcs: float  # m^2

    def __post_init__(self):
        object.__setattr__(self, "link", np.asarray(self.link, dtype=float))
        if self.rcs <= 0.0:
            raise ValueError(f"joint {self.name}: RCS must be positive")


@dataclass(frozen=True)
class BodyModel:
    """Anthropometrically scaled 13-joint scatterer set."""

    joints: tuple[JointSpec, ...]
    height_m: float
    weight_kg: float

    def __post_init__(self):
        if len(self.joints) != 13:
            raise ValueError("body model requires exactly 13 joints")
        for i, joint in enumerate(self.joints):
            if joint.parent is None:
                if i != TORSO:
                    raise ValueError("only the torso may be parentless")
            elif not 0 <= joint.parent < i:
                raise ValueError("parent index must precede the joint")

    @property
    def links(self) -> np.ndarray:
        """(13, 3) array of scaled link vectors."""
        return np.stack([j.link for j in self.joints])

    @property
    def rcs(self) -> np.ndarray:
        """(13,) array of scaled RCS values."""
        return np.array([j.rcs for j in self.joints])

    @property
    def thigh_length_m(self) -> float:
        return float(np.linalg.norm(self.joints[R_KNEE].link))

    @property
    def default_torso_height_m(self) -> float:
        """Ankle-to-torso chain height, placing the ankles at ground level."""
        return 1.2 * self.height_m / REFERENCE_HEIGHT_M


def build_body(height_m: float, weight_kg: float) -> BodyModel:
    """Build a body model scaled from the reference 1.8 m / 84.24 kg values.

    Link vectors scale linearly with height; RCS values scale with
    sqrt(height * weight) relative to the reference subject.
    """
    if height_m <= 0.0 or weight_kg <= 0.0:
        raise ValueError("height and weight must be positive")
    length_scale = height_m / REFERENCE_HEIGHT_M
    rcs_scale = math.sqrt(height_m * weight_kg) / math.sqrt(
        REFERENCE_HEIGHT_M * REFERENCE_WEIGHT_KG)
    joints = tuple(
        JointSpec(name, parent, np.asarray(link) * length_scale, rcs * rcs_scale)
        for name, parent, link, rcs in _JOINT_TABLE)
    return BodyModel(joints=joints, height_m=height_m, weight_kg=weight_kg)


@dataclass
class ActivityParams:
    """Activity selection plus the knobs of its motion program.

    Angle amplitudes are radians; the default amplitudes and gait frequency
    follow the standard free-space parameter set (30/45/35 degrees, 1 Hz).
    ``initial_position_m`` defaults to (2, 0) for in-place activities
    S1..S7 and (1, 0) for translating activities S8..S12.
    ``torso_height_m=None`` resolves to the ankle-grounding default of the
    body the params are evaluated with.
    """

    activity: Activity = Activity.S1
    gait_frequency_hz: float = 1.0
    thigh_amplitude_rad: float = math.radians(30.0)
    calf_amplitude_rad: float = math.radians(45.0)
    arm_amplitude_rad: float = math.radians(35.0)
    turn_amplitude_rad: float = math.radians(45.0)
    velocity_mps: tuple[float, float] = (1.5, 0.0)
    initial_position_m: tuple[float, float] | None = None
    torso_height_m: float | None = None
    walk_start_s: float = 1.5  # phase switch for S9/S11
    sit_start_s: float = 2.0  # phase switch for S10
    fall_start_s: float = 2.0  # phase switch for S12
    transition_duration_s: float = 1.5  # progress duration of sit/stand/fall

    def __post_init__(self):
        self.activity = Activity.parse(self.activity)
        if self.gait_frequency_hz <= 0.0:
            raise ValueError("gait frequency must be positive")
        if self.transition_duration_s <= 0.0:
            raise ValueError("transition duration must be positive")
        for name in ("walk_start_s", "sit_start_s", "fall_start_s"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def initial_xy(self) -> tuple[float, float]:
        if self.initial_position_m is not None:
            return tuple(self.initial_position_m)
        return (1.0, 0.0) if self.activity.translates else (2.0, 0.0)

    def resolved_torso_height(self, body: BodyModel) -> float:
        if self.torso_height_m is not None:
            return self.torso_height_m
        return body.default_torso_height_m


@dataclass(frozen=True)
class MotionState:
    """Pose parameters of the model at one instant."""

    t: float
    theta: np.ndarray  # (13,) local joint angles, radians
    yaw: float  # global z rotation, radians
    pitch: float  # global y rotation (body tipping), radians
    torso_position: np.ndarray  # (3,) meters


def progress(t, duration):
    """Raised-cosine ramp from 0 to 1 over ``duration``, clamped at 1.

    progress(0) = 0, progress(duration/2) = 0.5, progress(t >= duration) = 1,
    monotone non-decreasing.
    """
    if duration <= 0.0:
        raise ValueError("progress duration must be positive")
    frac = np.minimum(1.0, np.asarray(t, dtype=float) / duration)
    return 0.5 * (1.0 - np.cos(np.pi * frac))


# ---------------------------------------------------------------------------
# Per-activity angle programs.  Each returns (theta (n,13), yaw (n,),
# pitch (n,)) for an array of times.  theta[i] is the local y-rotation of
# joint i applied to its own link.
# ---------------------------------------------------------------------------

def _walk_theta(p: ActivityParams, t: np.ndarray) -> np.ndarray:
    """Steady-gait limb oscillation: legs antiphase, arms counter-swinging."""
    w = 2.0 * np.pi * p.gait_frequency_hz
    theta = np.zeros(t.shape + (13,))
    knee = p.thigh_amplitude_rad * np.sin(w * t)
    ankle = p.calf_amplitude_rad * np.sin(w * t + np.pi / 4.0)
    elbow = p.arm_amplitude_rad * np.sin(w * t + np.pi)
    theta[..., R_KNEE] = knee
    theta[..., L_KNEE] = -knee
    theta[..., R_ANKLE] = ankle
    theta[..., L_ANKLE] = -ankle
    theta[..., R_ELBOW] = elbow
    theta[..., L_ELBOW] = -elbow
    return theta


def _sit_theta(p: ActivityParams, t: np.ndarray) -> np.ndarray:
    """Squat program: hip folds back, both knees fold forward."""
    prog = progress(t, p.transition_duration_s)
    theta = np.zeros(t.shape + (13,))
    theta[..., HIP] = -0.5 * np.pi * prog
    theta[..., R_KNEE] = 0.5 * np.pi * prog
    theta[..., L_KNEE] = 0.5 * np.pi * prog
    return theta


def _stand_theta(p: ActivityParams, t: np.ndarray) -> np.ndarray:
    """Reverse of the squat: same angles evaluated at progress 1 - P."""
    prog = 1.0 - progress(t, p.transition_duration_s)
    theta = np.zeros(t.shape + (13,))
    theta[..., HIP] = -0.5 * np.pi * prog
    theta[..., R_KNEE] = 0.5 * np.pi * prog
    theta[..., L_KNEE] = 0.5 * np.pi * prog
    return theta


def _blend_residual(theta_target, theta_end, theta_target0, fade):
    """Cross-fade the residual between the previous phase's final angles and
    the new program's start so phase switches do not teleport joints."""
    return theta_target + (theta_end - theta_target0) * fade[..., None]


def _angle_program(p: ActivityParams, t: np.ndarray):
    act = p.activity
    w = 2.0 * np.pi * p.gait_frequency_hz
    theta = np.zeros(t.shape + (13,))
    yaw = np.zeros_like(t)
    pitch = np.zeros_like(t)

    if act is Activity.S1:
        pass

    elif act is Activity.S2:
        # Alternating punches; hands lag the elbows by a quarter cycle.
        s, c = np.sin(w * t), np.cos(w * t)
        theta[..., R_ELBOW] = -np.pi / 4.0 - p.arm_amplitude_rad * s
        theta[..., R_HAND] = -np.pi / 2.0 - p.calf_amplitude_rad * c
        theta[..., L_ELBOW] = -np.pi / 4.0 + p.arm_amplitude_rad * s
        theta[..., L_HAND] = -np.pi / 2.0 + p.calf_amplitude_rad * c
    elif act is Activity.S3:
        # Repetitive right-leg kick; lower leg offset by pi/6.
        s = np.sin(w * t)
        theta[..., R_KNEE] = p.thigh_amplitude_rad * s
        theta[..., R_ANKLE] = np.pi / 6.0 + p.calf_amplitude_rad * s
    elif act is Activity.S4:
        # Bend at the waist; hip counter-rotates so the legs stay vertical.
        c = 1.0 - np.cos(w * t)
        theta[..., TORSO] = 0.5 * np.pi * c
        theta[..., R_ELBOW] = -0.5 * np.pi * c
        theta[..., HIP] = -0.5 * np.pi * c
        theta[..., L_ELBOW] = -(np.pi / 3.0) * c
        theta[..., L_HAND] = -(np.pi / 12.0) * c
    elif act is Activity.S5:
        theta = _sit_theta(p, t)
    elif act is Activity.S6:
        theta = _stand_theta(p, t)
    elif act is Activity.S7:
        yaw = p.turn_amplitude_rad * np.sin(w * t)
    elif act is Activity.S8:
        theta = _walk_theta(p, t)

    elif act is Activity.S9:
        # Stand up, then walk with shifted time.  The walk-entry residual
        # fades over twice the transition window: the gait runs at full rate
        # while it decays, and the slower fade keeps the per-sample joint
        # displacement under the no-teleport bound.
        pre = t < p.walk_start_s
        theta[pre] = _stand_theta(p, t[pre])
        tp = t[~pre] - p.walk_start_s
        end = _stand_theta(p, np.array([p.walk_start_s]))[0]
        start = _walk_theta(p, np.array([0.0]))[0]
        fade = 1.0 - progress(tp, 2.0 * p.transition_duration_s)
        theta[~pre] = _blend_residual(_walk_theta(p, tp), end, start, fade)
    elif act is Activity.S10:
        # Walk, then fold into the seat: both knees ramp to -pi/2, the
        # walking oscillation of the other joints decays over the ramp.
        pre = t < p.sit_start_s
        theta[pre] = _walk_theta(p, t[pre])
        tp = t[~pre] - p.sit_start_s
        target = np.zeros(tp.shape + (13,))
        ramp = -0.5 * np.pi * progress(tp, p.transition_duration_s)
        target[..., R_KNEE] = ramp
        target[..., L_KNEE] = ramp
        end = _walk_theta(p, np.array([p.sit_start_s]))[0]
        fade = 1.0 - progress(tp, p.transition_duration_s)
        theta[~pre] = _blend_residual(target, end, np.zeros(13), fade)
    elif act is Activity.S11:
        # Lie flat (global pitch pi/2), rotate upright, then walk; same slow
        # walk-entry fade as S9.
        pre = t < p.walk_start_s
        pitch[pre] = 0.5 * np.pi * (1.0 - progress(t[pre], p.transition_duration_s))
        tp = t[~pre] - p.walk_start_s
        start = _walk_theta(p, np.array([0.0]))[0]
        fade = 1.0 - progress(tp, 2.0 * p.transition_duration_s)
        theta[~pre] = _blend_residual(_walk_theta(p, tp), np.zeros(13), start, fade)
        pitch_end = 0.5 * np.pi * (1.0 - float(progress(p.walk_start_s,
                                                        p.transition_duration_s)))
        pitch[~pre] = pitch_end * fade
    elif act is Activity.S12:
        # Walk, then tip over: global pitch ramps to pi/2 while the limb
        # oscillation decays from its value at the fall onset.
        pre = t < p.fall_start_s
        theta[pre] = _walk_theta(p, t[pre])
        tp = t[~pre] - p.fall_start_s
        end = _walk_theta(p, np.array([p.fall_start_s]))[0]
        fade = 1.0 - progress(tp, p.transition_duration_s)
        theta[~pre] = end * fade[..., None]
        pitch[~pre] = 0.5 * np.pi * progress(tp, p.transition_duration_s)
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown activity {act!r}")

    return theta, yaw, pitch


def _torso_track(body: BodyModel, p: ActivityParams, t: np.ndarray) -> np.ndarray:
    """Torso trajectory (n, 3) for the activity."""
    act = p.activity
    x0, y0 = p.initial_xy
    h = p.resolved_torso_height(body)
    lt = body.thigh_length_m
    vx, vy = p.velocity_mps
    pos = np.empty(t.shape + (3,))

    def seat_offset(prog):
        # Hip shifts back by L_thigh*sin and drops by L_thigh*(1-cos) as the
        # knees fold to pi/2 * progress.
        ang = 0.5 * np.pi * prog
        return lt * np.sin(ang), lt * (1.0 - np.cos(ang))

    if act in (Activity.S1, Activity.S2, Activity.S3, Activity.S4, Activity.S7):
        pos[...] = (x0, y0, h)
    elif act is Activity.S5:
        dx, dz = seat_offset(progress(t, p.transition_duration_s))
        pos[..., 0] = x0 - dx
        pos[..., 1] = y0
        pos[..., 2] = h - dz
    elif act is Activity.S6:
        dx, dz = seat_offset(1.0 - progress(t, p.transition_duration_s))
        pos[..., 0] = x0 - dx
        pos[..., 1] = y0
        pos[..., 2] = h - dz
    elif act is Activity.S8:
        pos[..., 0] = x0 + vx * t
        pos[..., 1] = y0 + vy * t
        pos[..., 2] = h
    elif act is Activity.S9:
        pre = t < p.walk_start_s
        dx, dz = seat_offset(1.0 - progress(t[pre], p.transition_duration_s))
        pos[pre, 0] = x0 - dx
        pos[pre, 1] = y0
        pos[pre, 2] = h - dz
        dxe, dze = seat_offset(1.0 - float(progress(p.walk_start_s,
                                                    p.transition_duration_s)))
        tp = t[~pre] - p.walk_start_s
        pos[~pre, 0] = x0 - dxe + vx * tp
        pos[~pre, 1] = y0 + vy * tp
        pos[~pre, 2] = h - dze
    elif act is Activity.S10:
        pre = t < p.sit_start_s
        pos[pre, 0] = x0 + vx * t[pre]
        pos[pre, 1] = y0 + vy * t[pre]
        pos[pre, 2] = h
        xe = x0 + vx * p.sit_start_s
        ye = y0 + vy * p.sit_start_s
        tp = t[~pre] - p.sit_start_s
        dx, dz = seat_offset(progress(tp, p.transition_duration_s))
        pos[~pre, 0] = xe - dx
        pos[~pre, 1] = ye
        pos[~pre, 2] = h - dz
    elif act is Activity.S11:
        pre = t < p.walk_start_s
        lying_z = 0.15
        prog = progress(t[pre], p.transition_duration_s)
        pos[pre, 0] = x0
        pos[pre, 1] = y0
        pos[pre, 2] = lying_z + (h - lying_z) * prog
        ze = lying_z + (h - lying_z) * float(progress(p.walk_start_s,
                                                      p.transition_duration_s))
        tp = t[~pre] - p.walk_start_s
        pos[~pre, 0] = x0 + vx * tp
        pos[~pre, 1] = y0 + vy * tp
        pos[~pre, 2] = ze
    elif act is Activity.S12:
        pre = t < p.fall_start_s
        pos[pre, 0] = x0 + vx * t[pre]
        pos[pre, 1] = y0 + vy * t[pre]
        pos[pre, 2] = h
        xe = x0 + vx * p.fall_start_s
        ye = y0 + vy * p.fall_start_s
        tp = t[~pre] - p.fall_start_s
        prog = progress(tp, p.transition_duration_s)
        pos[~pre, 0] = xe
        pos[~pre, 1] = ye
        pos[~pre, 2] = h * (1.0 - prog) + 0.15 * prog
    else:  # pragma: no cover
        raise ValueError(f"unknown activity {act!r}")
    return pos


def _check_times(t) -> np.ndarray:
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(tt < 0.0):
        raise ValueError("time must be non-negative")
    return tt


def joint_angles(params: ActivityParams, t):
    """Evaluate the activity's angle program.

    Returns (theta, yaw, pitch): the 13 local joint angles, the global yaw
    and the global pitch.  ``t`` may be a scalar or an array; for an array
    the outputs gain a leading time axis.
    """
    tt = _check_times(t)
    theta, yaw, pitch = _angle_program(params, tt)
    if np.ndim(t) == 0:
        return theta[0], float(yaw[0]), float(pitch[0])
    return theta, yaw, pitch


def torso_trajectory(body: BodyModel, params: ActivityParams, t) -> np.ndarray:
    """Torso position, (3,) for scalar ``t`` or (n, 3) for an array."""
    tt = _check_times(t)
    pos = _torso_track(body, params, tt)
    return pos[0] if np.ndim(t) == 0 else pos


def motion_state(body: BodyModel, params: ActivityParams, t: float) -> MotionState:
    theta, yaw, pitch = joint_angles(params, float(t))
    return MotionState(t=float(t), theta=theta, yaw=yaw, pitch=pitch,
                       torso_position=torso_trajectory(body, params, float(t)))


def sample_poses(body: BodyModel, params: ActivityParams, times) -> np.ndarray:
    """Forward kinematics for an array of times; returns (n, 13, 3) meters.

    Each child link is rotated by Rz(yaw) @ Ry(pitch + sum of chain angles)
    and added to its parent's position.
    """
    tt = _check_times(times)
    theta, yaw, pitch = _angle_program(params, tt)
    links = body.links
    pos = np.empty(tt.shape + (13, 3))
    pos[..., TORSO, :] = _torso_track(body, params, tt)
    cos_yaw, sin_yaw = np.cos(yaw), np.sin(yaw)
    for i in range(1, 13):
        parent = body.joints[i].parent
        angle = pitch + theta[..., list(_CHAINS[i])].sum(axis=-1)
        ca, sa = np.cos(angle), np.sin(angle)
        lx, ly, lz = links[i]
        rx = lx * ca + lz * sa
        rz = -lx * sa + lz * ca
        pos[..., i, 0] = pos[..., parent, 0] + rx * cos_yaw - ly * sin_yaw
        pos[..., i, 1] = pos[..., parent, 1] + rx * sin_yaw + ly * cos_yaw
        pos[..., i, 2] = pos[..., parent, 2] + rz
    return pos


def pose(body: BodyModel, params: ActivityParams, t: float) -> np.ndarray:
    """Positions of the 13 scatterers at one instant, (13, 3) meters."""
    return sample_poses(body, params, np.array([float(t)]))[0]
