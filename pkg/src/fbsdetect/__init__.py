"""Location-based identification of fake base stations during cell selection."""
from .arsss import ArsssObservation, arsss_fast, arsss_from_powers, matched_filter_power, observe
from .channel import (ChannelDraw, Scene, draw_channel, link_distance, make_ss_family,
                      synthesize_rx_slot)
from .detectors import (NO_SAFE_SS, Decision, detect_cooperative, detect_ml, detect_naive,
                        detect_sar)
from .montecarlo import (DetectorSpec, ScrEstimate, Trial, estimate_scr, gen_fig2_scene,
                         gen_fig3_realization, run_trial, sweep)
from .priors import (PriorModel, arsss_mean, arsss_std, f_max_pdf, gaussian_q, gaussian_q_inv,
                     log_fading_mean_db, log_fading_var_db, sar_threshold, sar_threshold_edge,
                     sar_threshold_nearest)
from .scr import (Quadrature, integrate, omega_indicator_nearest, scr_ml, scr_ml_nearest,
                  scr_no_check, scr_sar_bound)

__version__ = "0.1.0"
