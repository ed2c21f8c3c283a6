"""
Main application class for NetSwitch
Command-line front end over the library operations
"""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from netswitch import __version__
from netswitch.core import file_ops
from netswitch.core.design import METHOD_ALIASES, METHODS, default_bound, spnopt
from netswitch.core.errors import NetSwitchError, PreconditionError
from netswitch.core.floquet import averaged_generator, commutative_average, schedule_from_ratio, simulate
from netswitch.core.linalg import as_square, spectrum
from netswitch.core.optswitch import opt_switch
from netswitch.core.scenario import (
    ScenarioFormation,
    bundled_network,
    random_sparse_hurwitz,
    simulate_formation,
    write_formation,
)
from netswitch.core.sparsity import scnet
from netswitch.utils import config
from netswitch.utils.formatter import format_certificate, format_complex, format_design, format_number
from netswitch.utils.highlighter import highlight_json, to_json

logger = logging.getLogger(__name__)

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"


def cmd_sweep(A, B, steps):
    """
    Tabulate the averaged abscissa on a uniform grid of switching ratios

    Args:
        A (Network or array_like): First network
        B (Network or array_like): Second network
        steps (int): Number of grid intervals, steps + 1 rows

    Returns:
        list: Rows (k, alpha, is_min) with the first minimum flagged
    """
    steps = int(steps)
    if steps < 1:
        raise PreconditionError("steps must be at least 1")
    A = as_square(A, "A")
    B = as_square(B, "B")
    # Commuting pair, so the averaged network is the convex combination
    opt_switch(A, B)
    grid = [i / steps for i in range(steps + 1)]

    def alpha(k):
        return spectrum(commutative_average(A, B, k)).abscissa

    threads = max(1, int(config.get_setting("threads")))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(alpha, grid))
    else:
        values = [alpha(k) for k in grid]

    best = int(np.argmin(values))
    return [(k, a, i == best) for i, (k, a) in enumerate(zip(grid, values))]


class NetSwitchApp:
    """Main application class for NetSwitch"""

    def __init__(self, argv=None, stdout=None, stderr=None):
        """
        Initialize the application

        Args:
            argv (list, optional): Arguments, defaults to sys.argv[1:]
            stdout (file, optional): Report stream
            stderr (file, optional): Error stream
        """
        self.argv = sys.argv[1:] if argv is None else list(argv)
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.parser = self._setup_parser()
        self.args = None

    def _setup_parser(self):
        """Set up the argument parser"""
        parser = argparse.ArgumentParser(
            prog="netswitch",
            description="Improve network resilience by switching between commuting topologies",
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        parser.add_argument("--config", help="settings file (default .netswitch/settings.json)")
        parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
        parser.add_argument("--json", action="store_true", help="emit JSON reports")
        parser.add_argument("--no-color", action="store_true", help="never highlight JSON")
        sub = parser.add_subparsers(dest="command", required=True)

        p = sub.add_parser("abscissa", help="spectral abscissa of a network")
        p.add_argument("network")
        p.set_defaults(handler=self.cmd_abscissa)

        p = sub.add_parser("optswitch", help="optimal switching ratio of a commuting pair")
        p.add_argument("network_a")
        p.add_argument("network_b")
        p.set_defaults(handler=self.cmd_optswitch)

        p = sub.add_parser("scnet", help="maximal compatible forced-zero pattern")
        p.add_argument("network")
        p.add_argument("--order", type=int, help="centralizer basis order p")
        p.add_argument("--seed", type=int)
        p.add_argument("--initial", help="JSON list of 1-based [i, j] edges to start from")
        p.add_argument("--out", help="write the pattern as JSON")
        p.set_defaults(handler=self.cmd_scnet)

        p = sub.add_parser("design", help="design a sparse commuting network")
        p.add_argument("network")
        p.add_argument("--method", default="mccormick", choices=list(METHODS) + sorted(METHOD_ALIASES))
        p.add_argument("--gamma-low", type=float)
        p.add_argument("--gamma-high", type=float)
        p.add_argument("--bound-a", type=float, help="McCormick coefficient bound")
        p.add_argument("--order", type=int)
        p.add_argument("--restarts", type=int)
        p.add_argument("--max-iter", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--pattern", help="JSON forced-zero pattern, skips the pattern search")
        p.add_argument("--backend", choices=["auto", "simplex", "highs"])
        p.add_argument("--out", help="write the designed network (.json or .mtx)")
        p.set_defaults(handler=self.cmd_design)

        p = sub.add_parser("sweep", help="averaged abscissa over a grid of ratios")
        p.add_argument("network_a")
        p.add_argument("network_b")
        p.add_argument("--steps", type=int, default=100)
        p.add_argument("--out")
        p.set_defaults(handler=self.cmd_sweep)

        p = sub.add_parser("simulate", help="trajectory under a periodic switching law")
        p.add_argument("network_a")
        p.add_argument("network_b")
        p.add_argument("--k", type=float, required=True)
        p.add_argument("--period", type=float, default=1.0)
        p.add_argument("--segments", type=int, default=1)
        p.add_argument("--x0", help="initial state file, ones by default")
        p.add_argument("--periods", type=int, default=10)
        p.add_argument("--subsamples", type=int)
        p.add_argument("--out")
        p.set_defaults(handler=self.cmd_simulate)

        p = sub.add_parser("scenario", help="bundled scenarios")
        scenarios = p.add_subparsers(dest="scenario", required=True)

        s = scenarios.add_parser("formation", help="five-agent formation maneuver")
        s.add_argument("--out", required=True, help="output directory")
        s.add_argument("--network", help="network to use instead of the bundled five-node A")
        s.add_argument("--method", default="mccormick", choices=list(METHODS) + sorted(METHOD_ALIASES))
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--subsamples", type=int)
        s.set_defaults(handler=self.cmd_formation)

        s = scenarios.add_parser("random", help="seeded sparse Hurwitz network")
        s.add_argument("--n", type=int, default=100)
        s.add_argument("--nnz", type=int, default=140)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", required=True, help="network file (.json or .mtx)")
        s.set_defaults(handler=self.cmd_random)
        return parser

    def _setup_logging(self):
        """Set up the netswitch logger"""
        if self.args.verbose >= 2:
            level = logging.DEBUG
        elif self.args.verbose == 1:
            level = logging.INFO
        else:
            level = getattr(logging, str(config.get_setting("log_level")).upper(), logging.WARNING)

        root = logging.getLogger("netswitch")
        handler = next((h for h in root.handlers if getattr(h, "_netswitch", False)), None)
        if handler is None:
            handler = logging.StreamHandler(self.stderr)
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            handler._netswitch = True
            root.addHandler(handler)
        else:
            handler.setStream(self.stderr)
        root.setLevel(level)

    def start(self):
        """
        Run the selected command

        Returns:
            int: Exit code
        """
        self.args = self.parser.parse_args(self.argv)
        try:
            config.reset_settings()
            config.load_settings(self.args.config)
            self._setup_logging()
            self.args.handler(self.args)
        except NetSwitchError as e:
            self.stderr.write(f"[ERROR] {e.message}\n")
            return e.exit_code
        return 0

    # Output helpers

    def _emit(self, data, text):
        if self.args.json:
            color = not self.args.no_color and hasattr(self.stdout, "isatty") and self.stdout.isatty()
            self.stdout.write(highlight_json(to_json(data), color=color))
        else:
            self.stdout.write(text + "\n")

    def _csv(self, header, rows, path):
        if path:
            file_ops.write_csv(header, rows, path)
            logger.info("Wrote %s", path)
        else:
            file_ops.write_csv(header, rows, stream=self.stdout)

    # Commands

    def cmd_abscissa(self, args):
        net = file_ops.load_network(args.network)
        spec = spectrum(net.weights)
        data = {
            "label": net.label,
            "n": net.n,
            "alpha": spec.abscissa,
            "hurwitz": spec.is_hurwitz,
            "eigenvalues": [[v.real, v.imag] for v in spec.eigenvalues],
        }
        text = "\n".join([
            f"alpha         {format_number(spec.abscissa)}",
            f"hurwitz       {'yes' if spec.is_hurwitz else 'no'}",
            "eigenvalues   " + ", ".join(format_complex(v) for v in spec.eigenvalues),
        ])
        self._emit(data, text)

    def cmd_optswitch(self, args):
        A = file_ops.load_network(args.network_a)
        B = file_ops.load_network(args.network_b)
        cert = opt_switch(A, B)
        self._emit(cert.to_dict(), format_certificate(cert))

    def cmd_scnet(self, args):
        A = file_ops.load_network(args.network)
        initial = file_ops.load_pattern(args.initial, A.n) if args.initial else None
        pattern = scnet(A, initial, p=args.order, seed=args.seed)
        data = {
            "n": A.n,
            "order": args.order or A.n,
            "seed": args.seed,
            "size": len(pattern),
            "pattern": pattern.to_list(),
        }
        if args.out:
            file_ops.write_json(data, args.out)
        edges = " ".join(f"({i},{j})" for i, j in pattern)
        self._emit(data, f"forced zeros  {len(pattern)}\n{edges}")

    def cmd_design(self, args):
        A = file_ops.load_network(args.network)
        pattern = file_ops.load_pattern(args.pattern, A.n) if args.pattern else None
        result = spnopt(
            A,
            gamma_low=args.gamma_low,
            gamma_high=args.gamma_high,
            a=args.bound_a,
            p=args.order,
            method=args.method,
            seed=args.seed,
            restarts=args.restarts,
            max_iter=args.max_iter,
            pattern=pattern,
            backend=args.backend,
        )
        if args.out:
            file_ops.save_network(result.B, args.out)
        self._emit(result.to_dict(), format_design(result))

    def cmd_sweep(self, args):
        A = file_ops.load_network(args.network_a)
        B = file_ops.load_network(args.network_b)
        rows = cmd_sweep(A, B, args.steps)
        self._csv(["k", "alpha", "min"], rows, args.out)

    def cmd_simulate(self, args):
        A = file_ops.load_network(args.network_a)
        B = file_ops.load_network(args.network_b)
        x0 = file_ops.load_vector(args.x0, A.n) if args.x0 else np.ones(A.n)
        schedule = schedule_from_ratio(args.k, args.period, args.segments)
        trajectory = simulate(A, B, schedule, x0, args.periods, args.subsamples)
        logger.info("Averaged abscissa %.6g", averaged_generator(A, B, schedule).alpha)
        header = ["t"] + [f"x{i + 1}" for i in range(A.n)]
        rows = ([t] + list(x) for t, x in zip(trajectory.times, trajectory.states))
        self._csv(header, rows, args.out)

    def cmd_formation(self, args):
        A = file_ops.load_network(args.network) if args.network else bundled_network("five_node_A")
        result = spnopt(A, gamma_low=1.0, gamma_high=100.0, p=A.n, method=args.method, seed=args.seed)
        scenario = ScenarioFormation()
        run = simulate_formation(A, result.B, result.k_star, scenario, seed=args.seed,
                                 subsamples=args.subsamples)
        metadata = {
            "seed": args.seed,
            "method": result.method,
            "k_star": result.k_star,
            "alpha_star": result.alpha_star,
            "alpha_A": result.certificate.alpha_A,
            "alpha_B": result.alpha_B,
            "bound_a": default_bound(A.weights),
        }
        paths = write_formation(run, A, result.B, args.out, metadata)
        data = dict(metadata, files=paths)
        self._emit(data, "\n".join(
            [f"k*            {format_number(result.k_star)}",
             f"alpha*(Q)     {format_number(result.alpha_star)}"]
            + [f"wrote         {path}" for path in paths]
        ))

    def cmd_random(self, args):
        net = random_sparse_hurwitz(args.n, args.nnz, args.seed)
        file_ops.save_network(net, args.out)
        data = {
            "n": net.n,
            "nnz": net.nnz,
            "seed": args.seed,
            "alpha": spectrum(net.weights).abscissa,
            "path": args.out,
        }
        self._emit(data, f"wrote {net!r} to {args.out} (alpha {format_number(data['alpha'])})")


def main(argv=None):
    """Console entry point"""
    return NetSwitchApp(argv).start()
