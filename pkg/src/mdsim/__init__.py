"""FMCW radar human-activity micro-Doppler simulator and processing chain."""

from .config import BatchSpec, ConfigError, RunConfig, SubjectConfig, load_batch_spec, load_config
from .dsp import (Dtm, PipelineResult, ProcessingConfig, Rtm, aggregate, bulk_phase,
                  compensate, entropy, fsst, mti, pipeline, range_fft, savgol, stft,
                  torso_bulk_velocity)
from .echo import (RadarConfig, RawDataMatrix, WallConfig, bistatic_range,
                   free_space_config, measured_snr_db, residual_video_phase,
                   scatterer_amplitude, segment_crosses_wall, synthesize,
                   synthesize_scatterers, through_wall_config, tx_phase,
                   wall_extra_delay)
from .kinematics import (Activity, ActivityParams, BodyModel, JointSpec, MotionState,
                         build_body, joint_angles, motion_state, pose, progress,
                         sample_poses, torso_trajectory)
from .nnblock import (GlobalFilter, global_filter_backward, global_filter_forward,
                      gradient_check, label_smoothing_loss, smooth_labels)

__version__ = "0.1.0"
