"""Stacked-ensemble facial age estimation toolkit.

Combines point-age predictions from heterogeneous base estimators
(recorded service output, remote face APIs, bias-profile simulators)
through from-scratch regression meta-learners, and evaluates everything
with MAE / per-age MAE / age-band accuracy reports focused on the
underage-adult borderline.
"""

__version__ = "0.1.0"
