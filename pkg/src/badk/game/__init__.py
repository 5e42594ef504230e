from .adversaries import CenterHuggingA, RandomA, ShortVectorSeekerA
from .counterexample import counterexample_demo
from .curves import Curve, linear_curve, poly_curve
from .engine import (GameContext, GameParams, Interval, Transcript,
                     check_transcript_legality, play_game, schedule_scale,
                     schedule_time)
from .strategy import HeedlessB, PaperStrategyB, choose_side, expanding_ratio
from .verify import verify_outcome

__all__ = [
    "CenterHuggingA", "RandomA", "ShortVectorSeekerA", "counterexample_demo",
    "Curve", "linear_curve", "poly_curve", "GameContext", "GameParams",
    "Interval", "Transcript", "check_transcript_legality", "play_game",
    "schedule_scale", "schedule_time", "HeedlessB", "PaperStrategyB",
    "choose_side", "expanding_ratio", "verify_outcome",
]
