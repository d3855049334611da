import numpy as np

from bandstop_workbench import CbRule, MEASURED_BIAS_CASES, load_profile, tuning_curve_bias, tuning_curve_caps
from bandstop_workbench.utils.design_file import load_design


if __name__ == '__main__':

    doc = load_design('./results/design.json')     # written by design_filter.py

    curve = tuning_curve_caps(
        doc.design,
        doc.topology,
        np.geomspace(4.5e-12, 0.42e-12, 34),        # C_a sweep (F)
        CbRule.RECALIBRATED,                        # re-fit C_b to hold the bandwidth
        state = doc.state,
        loss = doc.loss
    )

    with open('./results/tuning_caps.csv', 'w', newline = '') as f:
        curve.write_csv(f)

    model = load_profile('./profiles/placeholder_varactor.json')

    curve = tuning_curve_bias(
        doc.design,
        doc.topology,
        model,
        MEASURED_BIAS_CASES,                            # (V1, V2) of the five measured states
        loss = doc.loss
    )

    with open('./results/tuning_bias.csv', 'w', newline = '') as f:
        curve.write_csv(f)
