#!/usr/bin/env python
# -*- coding: utf-8 -*-
import csv
import io
import json
import logging
import math
import os
import shutil
import tempfile

from . import helpers
from .model import save_checkpoint
from .trainer import EPOCH_FIELDS

logger = logging.getLogger(__name__)

EPOCHS_FILE = "epochs.jsonl"
SUMMARY_FILE = "summary.csv"
CHECKPOINT_FILE = "checkpoint.bin"
FAILURE_FILE = "FAILED"
SUMMARY_FORMAT = ("model", "rmse", "seconds", "epochs", "total_epochs", "stopped_reason")
TABLE_FORMAT = ("Model", "RMSE", "Time (Sec.)", "Epoch")


def _json_number(value):
    # JSON has no inf/nan literal
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def report_rmse(report):
    """Test RMSE when available, best validation RMSE otherwise"""
    return report.test_rmse if report.test_rmse is not None else report.best_validation_rmse


def epoch_lines(report):
    """JSON lines: one record per epoch then a summary record"""
    lines = []
    for record in report.records:
        row = record.as_dict()
        lines.append(
            json.dumps(dict((key, _json_number(row[key])) for key in EPOCH_FIELDS))
        )
    summary = dict((k, _json_number(v)) for k, v in report.as_dict().items() if k != "hyperparams")
    summary["summary"] = True
    summary["hyperparams"] = report.hyperparams
    lines.append(json.dumps(summary, sort_keys=True))
    return "\n".join(lines) + "\n"


def summary_rows(reports):
    """Header plus one row per report; hyperparameters are echoed as columns"""
    hp_keys = []
    for report in reports:
        for key in report.hyperparams:
            if key not in hp_keys:
                hp_keys.append(key)
    rows = [list(SUMMARY_FORMAT) + hp_keys]
    for report in reports:
        rows.append(
            [
                report.model,
                repr(report_rmse(report)),
                "{:.3f}".format(report.seconds),
                report.best_epoch,
                report.total_epochs,
                report.stopped_reason,
            ]
            + [report.hyperparams.get(key, "") for key in hp_keys]
        )
    return rows


def write_csv(filename, rows):
    with io.open(filename, "w", encoding="utf-8", newline="") as f:
        csv.writer(f).writerows(rows)


def render_table(reports):
    """Aligned text table with RMSE / seconds / epochs, in input order"""
    rows = [list(TABLE_FORMAT)]
    for report in reports:
        rows.append(
            [
                report.model,
                helpers.round_format_str(report_rmse(report), 5),
                "{:.3f}".format(report.seconds),
                str(report.best_epoch),
            ]
        )
    widths = [max(len(row[col]) for row in rows) for col in range(len(TABLE_FORMAT))]
    lines = []
    for n, row in enumerate(rows):
        lines.append("  ".join(cell.rjust(width) for cell, width in zip(row, widths)))
        if n == 0:
            lines.append("  ".join("-" * width for width in widths))
    return "\n".join(lines)


def save_table(reports, filename):
    """Comma-delimited comparison table"""
    write_csv(filename, summary_rows(reports))


def write_failure(directory, message):
    """Leave a failure marker in place of a run directory"""
    if os.path.isdir(directory):
        shutil.rmtree(directory)
    os.makedirs(directory)
    with io.open(os.path.join(directory, FAILURE_FILE), "w", encoding="utf-8") as f:
        f.write(message.rstrip("\n") + "\n")


class Writer(object):

    """Writes the artifacts of one run

    Parameters:
    :param report: TrainReport
    :param params: best ParamVector, saved as the checkpoint
    :param directory: run directory
    """

    def __init__(self, report, params=None, directory=None):
        self._report = report
        self._params = params
        self._directory = directory

    def _tostring(self):
        return epoch_lines(self._report)

    def save(self, directory=None):
        """Write the run directory atomically

        Files go to a temporary sibling directory that is renamed into place,
        so `directory` is either complete or absent.
        """
        directory = directory if directory else self._directory
        parent = os.path.dirname(os.path.abspath(directory))
        os.makedirs(parent, exist_ok=True)
        staging = tempfile.mkdtemp(prefix=".staging-", dir=parent)
        try:
            with io.open(os.path.join(staging, EPOCHS_FILE), "w", encoding="utf-8") as f:
                f.write(self._tostring())
            write_csv(os.path.join(staging, SUMMARY_FILE), summary_rows([self._report]))
            if self._params is not None:
                save_checkpoint(self._params, os.path.join(staging, CHECKPOINT_FILE))
            if os.path.isdir(directory):
                shutil.rmtree(directory)
            os.rename(staging, directory)
        except Exception:
            shutil.rmtree(staging, ignore_errors=True)
            raise
        logger.info("wrote %s", directory)
        return directory

    def __repr__(self):
        return "<class '{:s}'>".format(self.__class__.__name__)
