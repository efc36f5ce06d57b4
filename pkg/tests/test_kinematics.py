import math

import numpy as np
import pytest

from mdsim import (Activity, ActivityParams, build_body, joint_angles, motion_state,
                   pose, progress, sample_poses, torso_trajectory)
from mdsim.kinematics import (HEAD, HIP, L_ANKLE, L_ELBOW, L_HAND, L_KNEE, R_ANKLE,
                              R_ELBOW, R_HAND, R_KNEE, TORSO)

ALL_ACTIVITIES = list(Activity)


class TestBodyModel:
    def test_reference_table_values(self, body):
        assert np.allclose(body.joints[HEAD].link, [0.0, 0.0, 0.3])
        assert body.joints[TORSO].rcs == 1.0
        assert body.joints[R_KNEE].rcs == 0.4
        assert np.allclose(body.joints[2].link, [0.0, -0.2, 0.2])  # right shoulder
        assert np.allclose(body.joints[R_KNEE].link, [0.0, 0.0, -0.45])
        assert body.joints[HEAD].rcs == 0.5
        assert body.joints[L_ANKLE].rcs == 0.3

    def test_links_scale_linearly_with_height(self, body):
        half = build_body(0.9, 84.24)
        assert np.allclose(half.links, 0.5 * body.links)
        assert np.allclose(half.joints[HEAD].link, [0.0, 0.0, 0.15])

    def test_rcs_scales_with_sqrt_height_weight(self):
        # sqrt(1.8*21.06) / sqrt(1.8*84.24) = 0.5
        quarter_weight = build_body(1.8, 21.06)
        assert np.isclose(quarter_weight.joints[HEAD].rcs, 0.25)
        assert np.isclose(quarter_weight.joints[TORSO].rcs, 0.5)

    def test_parents_precede_children(self, body):
        for i, joint in enumerate(body.joints):
            if joint.parent is not None:
                assert joint.parent < i
        assert body.joints[TORSO].parent is None

    @pytest.mark.parametrize("height,weight", [(0.0, 80.0), (1.8, 0.0), (-1.0, 50.0)])
    def test_invalid_dimensions_rejected(self, height, weight):
        with pytest.raises(ValueError):
            build_body(height, weight)


class TestProgress:
    def test_endpoints_and_midpoint(self):
        assert progress(0.0, 2.0) == 0.0
        assert np.isclose(progress(2.0, 2.0), 1.0)
        assert np.isclose(progress(1.0, 2.0), 0.5)

    def test_clamps_and_monotone(self):
        t = np.linspace(0.0, 5.0, 200)
        p = progress(t, 2.0)
        assert np.all(np.diff(p) >= 0.0)
        assert np.isclose(p[-1], 1.0)

    def test_rejects_non_positive_duration(self):
        with pytest.raises(ValueError):
            progress(1.0, 0.0)


class TestAngles:
    def test_s1_all_zero(self):
        params = ActivityParams(activity="S1")
        for t in (0.0, 0.7, 3.9):
            theta, yaw, pitch = joint_angles(params, t)
            assert np.all(theta == 0.0)
            assert yaw == 0.0 and pitch == 0.0

    def test_s2_initial_angles(self):
        params = ActivityParams(activity="S2")
        theta, yaw, pitch = joint_angles(params, 0.0)
        a_calf = params.calf_amplitude_rad
        assert np.isclose(theta[R_ELBOW], -np.pi / 4)
        assert np.isclose(theta[R_HAND], -np.pi / 2 - a_calf)
        assert np.isclose(theta[L_ELBOW], -np.pi / 4)
        assert np.isclose(theta[L_HAND], -np.pi / 2 + a_calf)
        others = [i for i in range(13) if i not in (R_ELBOW, R_HAND, L_ELBOW, L_HAND)]
        assert np.all(theta[others] == 0.0)

    def test_s3_initial_angles(self):
        theta, _, _ = joint_angles(ActivityParams(activity="S3"), 0.0)
        assert np.isclose(theta[R_ANKLE], np.pi / 6)
        assert theta[R_KNEE] == 0.0

    def test_s8_quarter_cycle_knees(self):
        params = ActivityParams(activity="S8")
        theta, _, _ = joint_angles(params, 1.0 / (4.0 * params.gait_frequency_hz))
        assert np.isclose(theta[R_KNEE], params.thigh_amplitude_rad)
        assert np.isclose(theta[L_KNEE], -params.thigh_amplitude_rad)

    def test_s2_mirror_sums(self):
        params = ActivityParams(activity="S2")
        theta, _, _ = joint_angles(params, np.linspace(0.0, 2.0, 101))
        assert np.allclose(theta[:, R_ELBOW] + theta[:, L_ELBOW], -np.pi / 2)
        assert np.allclose(theta[:, R_HAND] + theta[:, L_HAND], -np.pi)

    @pytest.mark.parametrize("activity", ["S2", "S3", "S7", "S8"])
    def test_periodicity_at_gait_frequency(self, activity):
        params = ActivityParams(activity=activity)
        t = np.linspace(0.0, 1.0, 37)
        a0 = joint_angles(params, t)
        a1 = joint_angles(params, t + 1.0 / params.gait_frequency_hz)
        for ref, shifted in zip(a0, a1):
            assert np.allclose(ref, shifted, atol=1e-12)

    def test_s4_hip_counters_torso(self):
        params = ActivityParams(activity="S4")
        theta, _, _ = joint_angles(params, np.linspace(0.0, 3.0, 200))
        assert np.allclose(theta[:, HIP], -theta[:, TORSO])

    def test_s6_reverses_s5(self):
        sit = ActivityParams(activity="S5")
        stand = ActivityParams(activity="S6")
        dur = sit.transition_duration_s
        for t in np.linspace(0.0, dur, 23):
            theta_up, _, _ = joint_angles(stand, t)
            theta_down, _, _ = joint_angles(sit, dur - t)
            assert np.allclose(theta_up, theta_down, atol=1e-12)

    def test_s7_yaw_program(self):
        params = ActivityParams(activity="S7")
        t = np.linspace(0.0, 2.0, 50)
        theta, yaw, pitch = joint_angles(params, t)
        assert np.all(theta == 0.0)
        assert np.allclose(yaw, params.turn_amplitude_rad
                           * np.sin(2 * np.pi * params.gait_frequency_hz * t))
        assert np.all(pitch == 0.0)

    def test_s11_pitch_stays_in_quarter_turn(self):
        params = ActivityParams(activity="S11")
        _, _, pitch = joint_angles(params, np.linspace(0.0, 4.0, 400))
        assert np.all(pitch >= 0.0)
        assert np.all(pitch <= np.pi / 2 + 1e-12)

    def test_unknown_activity_rejected(self):
        with pytest.raises(ValueError):
            ActivityParams(activity="S13")
        with pytest.raises(ValueError):
            Activity.parse("jogging")

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            joint_angles(ActivityParams(activity="S1"), -0.1)


class TestPose:
    def test_s1_is_cumulative_link_sum(self, body):
        params = ActivityParams(activity="S1")
        x0, y0 = params.initial_xy
        h = params.resolved_torso_height(body)
        positions = pose(body, params, 1.3)
        assert np.allclose(positions[TORSO], [x0, y0, h])
        assert np.allclose(positions[HEAD], [x0, y0, h + 0.3])
        # right hand: shoulder offset then two arm links straight down
        assert np.allclose(positions[R_HAND], [x0, y0 - 0.2, h + 0.2 - 0.6])
        assert np.allclose(positions[L_ANKLE], [x0, y0, h - 1.2])

    def test_s8_torso_translates(self, body):
        params = ActivityParams(activity="S8", initial_position_m=(1.0, 0.0),
                                velocity_mps=(1.5, 0.2))
        t = 1.7
        assert np.allclose(torso_trajectory(body, params, t),
                           [1.0 + 1.5 * t, 0.2 * t, params.resolved_torso_height(body)])

    def test_s5_endpoint_drops_by_thigh_length(self, body):
        params = ActivityParams(activity="S5")
        x0, y0 = params.initial_xy
        h = params.resolved_torso_height(body)
        lt = body.thigh_length_m
        end = torso_trajectory(body, params, params.transition_duration_s)
        assert np.allclose(end, [x0 - lt, y0, h - lt])

    @pytest.mark.parametrize("activity", ALL_ACTIVITIES)
    def test_link_lengths_preserved(self, body, activity):
        params = ActivityParams(activity=activity)
        positions = sample_poses(body, params, np.linspace(0.0, 4.0, 57))
        for i, joint in enumerate(body.joints):
            if joint.parent is None:
                continue
            dist = np.linalg.norm(positions[:, i] - positions[:, joint.parent], axis=-1)
            assert np.allclose(dist, np.linalg.norm(joint.link), atol=1e-12)

    @pytest.mark.parametrize("activity", ALL_ACTIVITIES)
    def test_no_teleporting_at_128_hz(self, body, activity):
        # includes the phase switches of S9..S12
        params = ActivityParams(activity=activity)
        times = np.arange(int(4.0 * 128)) / 128.0
        positions = sample_poses(body, params, times)
        steps = np.linalg.norm(np.diff(positions, axis=0), axis=-1)
        assert steps.max() < 0.05

    def test_s9_walks_from_standup_endpoint(self, body):
        params = ActivityParams(activity="S9")
        t_w = params.walk_start_s
        before = torso_trajectory(body, params, t_w - 1e-9)
        after = torso_trajectory(body, params, t_w + 1e-9)
        assert np.allclose(before, after, atol=1e-6)
        later = torso_trajectory(body, params, t_w + 1.0)
        assert np.allclose(later - after,
                           [params.velocity_mps[0], params.velocity_mps[1], 0.0],
                           atol=1e-6)

    def test_s12_falls_to_lying_height(self, body):
        params = ActivityParams(activity="S12")
        end = torso_trajectory(body, params,
                               params.fall_start_s + params.transition_duration_s)
        assert np.isclose(end[2], 0.15)
        _, _, pitch = joint_angles(params, params.fall_start_s
                                   + params.transition_duration_s)
        assert np.isclose(pitch, np.pi / 2)

    def test_motion_state_s1_invariants(self, body):
        params = ActivityParams(activity="S1")
        states = [motion_state(body, params, t) for t in (0.0, 1.1, 3.7)]
        for state in states:
            assert np.all(state.theta == 0.0)
            assert np.allclose(state.torso_position, states[0].torso_position)

    def test_default_initial_position_by_activity(self):
        assert ActivityParams(activity="S3").initial_xy == (2.0, 0.0)
        assert ActivityParams(activity="S10").initial_xy == (1.0, 0.0)
