from .constants import ClaimedConstants, LEMMA3_CASE_CONSTANTS
from .grid import GridSpec, build_lambda_grid
from .report import CertificationReport, to_csv, to_jsonl
from .sampled import (
    GapReport,
    certify_lemma2,
    certify_lemma3,
    certify_lipschitz,
    demonstrate_original_gap,
    lemma2_ratio,
    lemma3_ratio,
    lipschitz_ratio,
)
from .prover import IntervalBox, prove_square, prove_sup_bound, ratio_upper, region_boxes
