"""Windowed componentwise-maxima declustering of daily multivariate series."""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyPanel

SUMMER_MONTHS = (6, 7, 8)


@dataclass(frozen=True)
class DailyPanel:
    """Daily discharge matrix: rows are days, columns are stations.

    Missing values are NaN.  Dates are numpy datetime64[D], strictly
    increasing.
    """

    dates: np.ndarray
    values: np.ndarray
    stations: tuple

    def __post_init__(self):
        object.__setattr__(self, "dates",
                           np.asarray(self.dates, dtype="datetime64[D]"))
        object.__setattr__(self, "values",
                           np.asarray(self.values, dtype=float))
        object.__setattr__(self, "stations", tuple(self.stations))
        if self.values.ndim != 2:
            raise ValueError("values must be a 2-D matrix")
        if self.dates.size != self.values.shape[0]:
            raise ValueError("row count must equal date count")
        if self.values.shape[1] != len(self.stations):
            raise ValueError("column count must equal station count")
        if self.dates.size > 1 and np.any(np.diff(self.dates).astype(int) <= 0):
            raise ValueError("dates must be strictly increasing")

    def summer_only(self):
        months = self.dates.astype("datetime64[M]").astype(int) % 12 + 1
        keep = np.isin(months, SUMMER_MONTHS)
        return DailyPanel(self.dates[keep], self.values[keep], self.stations)


@dataclass(frozen=True)
class FloodEvent:
    """Componentwise maxima over one declustering window."""

    start: np.datetime64
    end: np.datetime64
    maxima: np.ndarray
    triggers: frozenset

    @property
    def year(self):
        return int(self.start.astype("datetime64[Y]").astype(int)) + 1970


def decluster(panel, marginal_prob=0.9, window_days=9):
    """Extract non-overlapping flood events from a daily panel.

    Scanning forward in time, a window of `window_days` days opens on the
    first day any station exceeds its empirical `marginal_prob` quantile;
    the event records the per-station maxima over the window and scanning
    resumes after the window closes.  Returns an empty list when nothing
    exceeds.
    """
    if panel.dates.size == 0:
        raise EmptyPanel("panel has no rows")
    if panel.dates.size < window_days:
        raise EmptyPanel(f"panel shorter than the {window_days}-day window")
    with np.errstate(invalid="ignore"):
        thresholds = np.nanquantile(panel.values, marginal_prob, axis=0)
    exceed = panel.values > thresholds  # NaN compares False
    trigger_rows = np.flatnonzero(exceed.any(axis=1))
    events = []
    next_free = 0
    for row in trigger_rows:
        if row < next_free:
            continue
        stop = min(row + window_days, panel.dates.size)
        window = panel.values[row:stop]
        all_nan = np.all(np.isnan(window), axis=0)
        filled = np.where(np.isnan(window), -np.inf, window)
        maxima = np.where(all_nan, np.nan, filled.max(axis=0))
        triggers = frozenset(panel.stations[j]
                             for j in np.flatnonzero(exceed[row]))
        events.append(FloodEvent(panel.dates[row], panel.dates[stop - 1],
                                 maxima, triggers))
        next_free = stop
    return events


def events_matrix(events):
    """Stack event maxima into an (n_events, n_stations) array."""
    return np.vstack([ev.maxima for ev in events])


def event_years(events):
    """Block labels (calendar year of window start) for the bootstrap."""
    return np.array([ev.year for ev in events])
