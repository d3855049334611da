from pathlib import Path

from bandstop_workbench import FilterSpec, CalibrationTarget, calibrate, select_topology, synthesize
from bandstop_workbench.utils.design_file import DesignFile, save_design


if __name__ == '__main__':

    spec = FilterSpec(
        f0 = 0.83e9,            # center frequency (Hz)
        delta = 0.18,           # fractional bandwidth
        order = 2,
        z0 = 50.0,
        cc = 2.2e-12            # series C_C on each branch (F)
    )

    design = synthesize(spec)

    topology, report = select_topology(
        design,
        show_progress = True
    )
    for r in report:
        print(r.topology.value, r.score)

    result = calibrate(
        design,
        topology,
        CalibrationTarget(
            f0_target = spec.f0,
            fbw_target = spec.delta,
            weight_fbw = 0.25       # bandwidth error weight in the objective
        ),
        max_evals = 500
    )

    print(f'C_a = {result.state.ca * 1e12:.4f} pF, C_b = {result.state.cb * 1e12:.4f} pF')
    print(f'f_notch = {result.metrics.f_notch / 1e9:.4f} GHz, FBW = {result.metrics.fbw:.4f}')

    Path('./results').mkdir(exist_ok = True)
    save_design('./results/design.json', DesignFile(design, topology = topology, state = result.state))
