import logging
import os

import numpy as np
import pandas as pd

from lib.utils.tools import FLOAT_FORMAT, atomic_path, format_float, mkdir_if_missing, write_yaml

logger = logging.getLogger(__name__)


class CsvOutput:
    '''
    This class is responsible for writing the study results into CSV files.

    Every file goes through a pandas DataFrame into a temporary file next to
    its final name and is renamed once complete.
    '''

    COEFFICIENTS = "coefficients.csv"
    DISPERSION_PROFILE = "dispersion_profile.csv"
    CAUSTIC_REPORT = "caustic_report.csv"
    F1F2_CURVES = "f1f2_curves.csv"
    JOINT_ROOTS = "joint_roots.csv"
    ERROR_HISTORY = "error_history.csv"
    RESIDUAL_ENERGY = "residual_energy.csv"
    CAUSTIC_RAYS = "caustic_rays.csv"
    SIMULATION_ERROR = "simulation_error.csv"
    DISCREPANCY = "discrepancy.csv"

    def __init__(self, out_dir):
        self.out_dir = str(out_dir)
        mkdir_if_missing(self.out_dir)
        self.written = []

    def path(self, filename):
        return os.path.join(self.out_dir, filename)

    def _write(self, df, filename):
        fpath = self.path(filename)
        with atomic_path(fpath) as tmp:
            df.to_csv(tmp, index=False, float_format=FLOAT_FORMAT)
        self.written.append(fpath)
        logger.info(f"wrote {fpath} ({len(df)} rows)")
        return fpath

    def write_coefficients(self, coeffs):
        df = pd.DataFrame({"k": coeffs.offsets.astype(int), "gamma": coeffs.full()})
        return self._write(df, self.COEFFICIENTS)

    def write_dispersion_profile(self, profile):
        df = pd.DataFrame({
            "phi": profile.phi,
            "xi_tau": profile.xi_tau,
            "eta_tau": profile.eta_tau,
            "vg_over_c": profile.vg_over_c,
        })
        return self._write(df, self.DISPERSION_PROFILE)

    def write_caustic_report(self, report):
        rows = [
            {
                "phi_c": p.phi_c,
                "k_c": p.k_c,
                "U_c": p.U_c,
                "kind": p.kind.value,
                "backend": report.backend.value,
                "sigma": report.sigma,
            }
            for p in report.stationary_points
        ]
        df = pd.DataFrame(rows, columns=["phi_c", "k_c", "U_c", "kind", "backend", "sigma"])
        return self._write(df, self.CAUSTIC_REPORT)

    def write_f1f2_curves(self, curves):
        df = pd.DataFrame({"theta": curves.theta, "f1": curves.f1, "f2": curves.f2})
        return self._write(df, self.F1F2_CURVES)

    def write_joint_roots(self, roots):
        df = pd.DataFrame(
            [(r.theta_star, r.phi_star, r.f1, r.f2) for r in roots],
            columns=["theta_star", "phi_star", "f1", "f2"],
            dtype=float,
        )
        return self._write(df, self.JOINT_ROOTS)

    def write_error_history(self, history):
        df = pd.DataFrame({"t": history.times, "linf": history.linf})
        return self._write(df, self.ERROR_HISTORY)

    def write_field_grid(self, field, filename=RESIDUAL_ENERGY):
        # header: t, then one column per x value
        columns = ["t"] + [format_float(x) for x in field.x]
        data = np.column_stack([field.t, field.values])
        return self._write(pd.DataFrame(data, columns=columns), filename)

    def write_caustic_rays(self, rays):
        df = pd.DataFrame(
            [(r.t, r.x, r.phi_c) for r in rays], columns=["t", "x", "phi_c"], dtype=float
        )
        return self._write(df, self.CAUSTIC_RAYS)

    def write_simulation_error(self, result):
        df = pd.DataFrame({
            "t": result.times,
            "linf_simulation": result.linf_simulation,
            "linf_model": result.linf_model,
        })
        return self._write(df, self.SIMULATION_ERROR)

    def write_discrepancy(self, records):
        df = pd.DataFrame(
            [vars(r) for r in records],
            columns=["claim_id", "reference_location", "reference_value", "computed_value", "agree", "tolerance"],
        )
        return self._write(df, self.DISCREPANCY)

    def write_metadata(self, metadata, filename):
        fpath = self.path(filename)
        write_yaml(metadata, fpath)
        self.written.append(fpath)
        logger.info(f"wrote {fpath}")
        return fpath
