"""``excidyn <command> --config <path> --out <dir> [--set key=value ...]``.

Exit codes: 0 success, 2 configuration/input error, 3 numerical failure,
4 I/O error. Errors are reported on stderr as ``ERROR <code>: <detail>``.
``EXCIDYN_THREADS`` caps the worker threads used by parameter sweeps.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import correlations, fmo, lindblad, multipartite, output, tcl, thermo
from .config import COMMANDS, RunConfig, to_complex, to_matrix, validate_config
from .errors import EXIT_IO, EXIT_NUMERIC, ConfigError, ExcidynError

BLP_LABEL = "BLP measure (lower bound: fixed initial pair |+>, |->)"


def _threads() -> int:
    raw = os.environ.get("EXCIDYN_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return max(1, min(8, os.cpu_count() or 1))


def _hamiltonian(params) -> fmo.SiteHamiltonian:
    path = params.get("hamiltonian")
    return fmo.load_site_hamiltonian(path) if path else fmo.builtin_fmo8()


def _bath(params, gamma0) -> tcl.BathSpec:
    args = (gamma0, params["delta_omega"], params["delta"], params["omega0"])
    if params["units"] == "cm-1":
        return tcl.BathSpec.from_cm1(*args)
    return tcl.BathSpec(*(float(a) for a in args))


def _bath_summary(bath: tcl.BathSpec) -> dict:
    return {
        "gamma0_rad_per_ps": bath.gamma0,
        "delta_omega_rad_per_ps": bath.delta_omega,
        "delta_rad_per_ps": bath.delta,
        "omega0_rad_per_ps": bath.omega0,
        "regime_at_zero_detuning": bath.regime(),
    }


def _run_eig(params, out: Path) -> dict:
    h = _hamiltonian(params)
    basis = fmo.diagonalize(h)
    order = np.argsort(basis.energies_cm1)[::-1]
    compare = fmo.compare_with_reference(basis) if h.n_sites == 8 else None
    columns = ["exciton", "energy_cm1"] + [f"amp_site{i + 1}" for i in range(h.n_sites)]
    if compare:
        columns += ["table_energy_cm1", "energy_deviation_cm1", "max_abs_amplitude_deviation"]
        ref = fmo.reference_excitons()
    rows = []
    for k in order:
        row = [f"e{k + 1}", basis.energies_cm1[k], *basis.site_amplitudes[k]]
        if compare:
            row += [ref.energies_cm1[k], compare["energy_deviation_cm1"][k], np.abs(compare["amplitude_deviation"][k]).max()]
        rows.append(row)
    output.write_csv(out / "excitons.csv", columns, rows, "energies cm-1; amplitudes dimensionless (largest component positive); rows in descending energy")
    report = {
        "n_sites": h.n_sites,
        "site_labels": list(h.site_labels),
        "energies_cm1_descending": basis.energies_cm1[order].tolist(),
        "energy_sum_cm1": float(basis.energies_cm1.sum()),
        "hamiltonian_trace_cm1": float(np.trace(h.energies_cm1)),
        "sign_convention": basis.sign_convention,
    }
    if compare:
        report.update(
            table_energy_sum_cm1=compare["table_energy_sum_cm1"],
            max_energy_deviation_cm1=compare["max_energy_deviation_cm1"],
            max_amplitude_deviation=compare["max_amplitude_deviation"],
        )
    output.write_report(out / "eig_report.yaml", report, "cm-1")
    return report


_TCL_COLUMNS = ["t_ps", "re_u", "im_u", "abs_u2", "delta_p"]
_TCL_UNITS = "t_ps ps; u dimensionless; abs_u2 = |u|^2; delta_p = 2|u|^2 - 1"


def _tcl_rows(times, u):
    return zip(times, u.real, u.imag, tcl.excited_population(u), tcl.population_difference(u))


def _run_tcl(params, out: Path) -> dict:
    gammas = params["gamma0"] if isinstance(params["gamma0"], list) else [params["gamma0"]]
    sweep = isinstance(params["gamma0"], list)
    n = int(round(params["t_final_ps"] / params["dt_ps"]))
    times = np.linspace(0.0, n * params["dt_ps"], n + 1)
    stride = params["record_every"]
    keep = np.r_[np.arange(0, n + 1, stride), [n] if n % stride else []].astype(int)

    def one(idx_gamma):
        idx, g = idx_gamma
        bath = _bath(params, g)
        closed = tcl.closed_form_trace(bath, times)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            kernel = tcl.amplitude_kernel_integration(bath, times)
        suffix = f"_{idx}" if sweep else ""
        for name, trace in (("closed_form", closed), ("kernel", kernel)):
            output.write_csv(out / f"tcl_{name}{suffix}.csv", _TCL_COLUMNS, _tcl_rows(times[keep], trace.u_values[keep]), _TCL_UNITS)
        return {
            **_bath_summary(bath),
            "max_abs_difference": float(np.abs(closed.u_values - kernel.u_values).max()),
            "kernel_step_ps": float(times[1] - times[0]) if n else 0.0,
            "recommended_step_ps": tcl.recommended_step(bath),
            "files": [f"tcl_closed_form{suffix}.csv", f"tcl_kernel{suffix}.csv"],
        }

    with ThreadPoolExecutor(max_workers=min(_threads(), len(gammas))) as pool:
        runs = list(pool.map(one, enumerate(gammas)))
    report = {"runs": runs}
    output.write_report(out / "tcl_report.yaml", report, "rates rad/ps; times ps")
    return report


def _scenario(params) -> lindblad.TransportScenario:
    return lindblad.TransportScenario(
        initial_site=params["initial_site"],
        t_final_ps=float(params["t_final_ps"]),
        dt_ps=float(params["dt_ps"]),
        dephasing_rate=float(params["dephasing_rate"]),
        sink_rate=float(params["sink_rate"]),
        loss_rate=float(params["loss_rate"]),
        sink_site=params["sink_site"],
    )


def _transport(params):
    h = _hamiltonian(params)
    s = _scenario(params)
    model = lindblad.build_fmo_transport_model(s, h)
    traj = lindblad.propagate(model, lindblad.localized_state(model, s.initial_site), s.t_final_ps, s.dt_ps, params["record_every"])
    return h, s, traj


def _run_lindblad(params, out: Path) -> dict:
    h, s, traj = _transport(params)
    columns = ["t_ps", "pop_ground"] + [f"pop_site{i + 1}" for i in range(h.n_sites)] + ["pop_sink", "trace", "purity"]
    pops = traj.populations
    rows = (
        [t, *p, tr, pu]
        for t, p, tr, pu in zip(traj.times_ps, pops, traj.channels["trace"], traj.channels["purity"])
    )
    output.write_csv(
        out / "trajectory.csv",
        columns,
        rows,
        "t_ps ps; populations dimensionless; trace = trace before renormalization; basis ground=0, sites 1..N, sink=N+1",
    )
    report = {
        "scenario": {k: getattr(s, k) for k in s.__dataclass_fields__},
        "transfer_efficiency": lindblad.transfer_efficiency(traj),
        "max_trace_drift": float(np.abs(traj.channels["trace"] - 1).max()),
        "min_eigenvalue": float(traj.channels["min_eigenvalue"].min()),
        "max_purity": float(traj.channels["purity"].max()),
    }
    output.write_report(out / "lindblad_report.yaml", report, "rates 1/ps; times ps")
    return report


def _run_nonmarkov(params, out: Path) -> dict:
    n = int(round(params["t_final_ps"] / params["dt_ps"]))
    times = np.linspace(0.0, n * params["dt_ps"], n + 1)
    if params["family"] == "lorentzian":
        bath = _bath(params, params["gamma0"])
        if params["source"] == "closed_form":
            u = tcl.closed_form_trace(bath, times).u_values
        else:
            u = tcl.amplitude_kernel_integration(bath, times).u_values
        channel = {"family": "lorentzian", "source": params["source"], **_bath_summary(bath)}
    else:
        rate = float(params["damping_rate"])
        u = np.exp(-rate * times / 2).astype(complex)
        channel = {"family": "markovian", "damping_rate_per_ps": rate}
    t1 = correlations.channel_trajectory(times, u, correlations.PLUS)
    t2 = correlations.channel_trajectory(times, u, correlations.MINUS)
    dist = correlations.trace_distance_series(t1, t2)
    blp = correlations.blp_nonmarkovianity(t1, t2)
    output.write_csv(
        out / "trace_distance.csv",
        ["t_ps", "measure_label", "value"],
        ([t, "trace_distance", d] for t, d in zip(times, dist)),
        "t_ps ps; trace distance dimensionless",
    )
    report = {"channel": channel, "initial_pair": ["|+>", "|->"], "blp_measure": blp, "label": BLP_LABEL, "t_final_ps": float(times[-1])}
    output.write_report(out / "blp_report.yaml", report, "dimensionless; times ps")
    return report


def _run_measures(params, out: Path) -> dict:
    h, s, traj = _transport(params)
    a, b = (1 + h.index(x) for x in params["site_pair"])
    pair_tag = "_".join(x.replace(" ", "") for x in params["site_pair"])
    rows = []
    last = None
    sample = range(0, len(traj), params["sample_every"])
    idx = list(sample) + ([len(traj) - 1] if (len(traj) - 1) % params["sample_every"] else [])
    for k in idx:
        t = traj.times_ps[k]
        rho = traj.states[k]
        rows.append([t, "entropy_bits", correlations.von_neumann_entropy(rho)])
        rows.append([t, "purity", traj.channels["purity"][k]])
        pair = multipartite.site_pair_qubits(rho, a, b)
        rows.append([t, f"concurrence_{pair_tag}", correlations.concurrence(pair)])
        rows.append([t, f"mutual_info_bits_{pair_tag}", correlations.mutual_information(pair)])
        if params["discord"]:
            last = correlations.discord_two_qubit(pair)
            rows.append([t, f"discord_bits_{pair_tag}", last.discord_bits])
    output.write_csv(out / "measures.csv", ["t_ps", "measure_label", "value"], rows, "t_ps ps; entropies and informations in bits")
    report = {"site_pair": list(params["site_pair"]), "samples": len(idx)}
    if last is not None:
        report["final_discord"] = {
            "t_ps": float(traj.times_ps[idx[-1]]),
            "mutual_info_bits": last.mutual_info_bits,
            "classical_corr_bits": last.classical_corr_bits,
            "discord_bits": last.discord_bits,
            "measured_subsystem": last.measured_subsystem,
            "argmax_theta": last.theta,
            "argmax_phi": last.phi,
        }
        output.write_report(out / "discord_report.yaml", report, "bits; angles rad")
    return report


def _run_thermo(params, out: Path) -> dict:
    ctx = thermo.ThermoContext(float(params["temperature_K"]))
    flags = []
    work = thermo.dissipated_work(to_matrix(params["rho"]), to_matrix(params["rho_reversed"]), ctx)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        lost = thermo.predictive_lost_work(to_matrix(params["rho_sx_before"]), to_matrix(params["rho_sx_after"]), params["dims"], ctx)
    flags += [getattr(w.message, "code", "Warning") for w in caught]
    if math.isinf(work.relative_entropy_nats):
        flags.append("InfiniteRelativeEntropy")
    report = {
        "temperature_K": ctx.temperature_K,
        "kB_cm1_per_K": ctx.kB_cm1_per_K,
        "relative_entropy_nats": work.relative_entropy_nats,
        "dissipated_work_cm1": work.dissipated_work_cm1,
        "dissipated_work_zJ": work.dissipated_work_zJ,
        "entropy_production_nats": work.entropy_production_nats,
        "lost_work_cm1": lost,
        "lost_work_zJ": lost * fmo.UNITS.cm1_to_zJ,
        "cm1_to_zJ": fmo.UNITS.cm1_to_zJ,
        "warnings": flags,
    }
    output.write_report(out / "thermo_report.yaml", report, "relative entropy nats; work cm-1 and zJ; entropy production in units of kB")
    return report


def _run_states(params, out: Path) -> dict:
    family = params["family"]
    n = params["n_qubits"]
    if family == "W":
        state = multipartite.w_state(n)
    elif family == "GHZ":
        state = multipartite.ghz_state(n, to_complex(params["alpha"]), to_complex(params["beta"]))
    elif family == "general":
        if params["coeffs"] is None:
            raise ConfigError("coeffs: required for family 'general'")
        state = multipartite.general_single_excitation([to_complex(c) for c in params["coeffs"]], n)
    else:
        basis = fmo.diagonalize(_hamiltonian(params))
        k = params["exciton"]
        if k > basis.n_excitons:
            raise ConfigError(f"exciton: {k} exceeds the {basis.n_excitons} available excitons")
        coeffs = basis.site_amplitudes[k - 1]
        state = multipartite.general_single_excitation(coeffs / np.linalg.norm(coeffs), basis.n_excitons)
    amps = [[a.real, a.imag] for a in state.amplitudes]
    output.write_report(out / "state.yaml", {"n_qubits": state.n_qubits, "family": state.family, "amplitudes": amps}, "amplitudes as [re, im]; qubit 1 is the most significant bit")
    rows = []
    for i in range(1, state.n_qubits + 1):
        for j in range(i + 1, state.n_qubits + 1):
            red = state.reduced([i, j])
            row = [str(i), str(j), correlations.concurrence(red), correlations.mutual_information(red)]
            if params["discord"]:
                row.append(correlations.discord_two_qubit(red).discord_bits)
            rows.append(row)
    columns = ["qubit_a", "qubit_b", "concurrence", "mutual_info_bits"] + (["discord_bits"] if params["discord"] else [])
    output.write_csv(out / "reductions.csv", columns, rows, "concurrence dimensionless; informations in bits")
    return {"n_qubits": state.n_qubits, "family": state.family, "pairs": len(rows)}


_RUNNERS = {
    "eig": _run_eig,
    "tcl": _run_tcl,
    "lindblad": _run_lindblad,
    "nonmarkov": _run_nonmarkov,
    "measures": _run_measures,
    "thermo": _run_thermo,
    "states": _run_states,
}


def run(config: RunConfig, out_dir=None) -> dict:
    """Dispatch ``config.command`` and write its files into the output directory."""
    out = Path(out_dir or config.output_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise PermissionError(f"output directory {out} is not writable")
    return _RUNNERS[config.command](config.overrides, out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="excidyn", description="FMO exciton dynamics and information measures")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="YAML config document")
    parser.add_argument("--out", help="output directory (overrides output_dir in the config)")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
    return parser


def _error(code, detail, status):
    print(f"ERROR {code}: {detail}", file=sys.stderr)
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        document = Path(args.config).read_text() if args.config else ""
    except OSError as exc:
        return _error("IOError", exc, EXIT_IO)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            config = validate_config(document, args.command, args.overrides)
            if not (args.out or config.output_dir):
                raise ConfigError("no output directory: pass --out or set output_dir")
            run(config, args.out)
            status = 0
        except ExcidynError as exc:
            status = (exc.code, exc.detail, exc.exit_status)
        except OSError as exc:
            status = ("IOError", exc, EXIT_IO)
        except ValueError as exc:
            status = ("ValueError", exc, EXIT_NUMERIC)
    # warnings first, so the error stays the last line
    for w in caught:
        print(f"WARNING {getattr(w.message, 'code', w.category.__name__)}: {w.message}", file=sys.stderr)
    return status if status == 0 else _error(*status)


if __name__ == "__main__":
    sys.exit(main())
