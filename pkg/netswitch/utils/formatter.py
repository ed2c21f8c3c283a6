"""
Report formatter for NetSwitch
Formats numbers, matrices and certificates for the terminal
"""

import numpy as np


def format_number(value):
    """
    Format a number with 17 significant digits

    Args:
        value: Number, None or string

    Returns:
        str: Text that parses back to the same double
    """
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % float(value)


def format_complex(z, digits=6):
    """Short text for a possibly complex eigenvalue"""
    z = complex(z)
    if abs(z.imag) <= 1e-12 * max(1.0, abs(z)):
        return f"{z.real:.{digits}g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.{digits}g}{sign}{abs(z.imag):.{digits}g}i"


def format_matrix(M, digits=6):
    """
    Format a matrix as aligned columns

    Args:
        M (array_like): Real matrix
        digits (int): Significant digits

    Returns:
        str: One line per row
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    cells = [[f"{v:.{digits}g}" for v in row] for row in M]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)


def _value(v, digits=6):
    if v is None:
        return "n/a"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.{digits}g}"
    return str(v)


def format_certificate(cert, digits=6):
    """
    Format a switching certificate

    Args:
        cert (SwitchCertificate): Certificate from opt_switch
        digits (int): Significant digits

    Returns:
        str: Multi-line report
    """
    lo, hi = cert.argmin_interval
    lines = [
        f"k*            {_value(cert.k_star, digits)}",
        f"alpha*(Q)     {_value(cert.alpha_star, digits)}",
        f"alpha(A)      {_value(cert.alpha_A, digits)}",
        f"alpha(B)      {_value(cert.alpha_B, digits)}",
        f"improvable    {_value(cert.improvable)}",
        f"unique max    {_value(cert.uniqueness)}",
        f"lower bound   {_value(cert.lower_bound, digits)}",
        f"upper bound   {_value(cert.upper_bound, digits)}",
    ]
    if hi > lo:
        lines.append(f"argmin        [{lo:.{digits}g}, {hi:.{digits}g}]")
    return "\n".join(lines)


def format_design(result, digits=6):
    """
    Format a design result

    Args:
        result (DesignResult): Result from spnopt
        digits (int): Significant digits

    Returns:
        str: Multi-line report with the designed matrix
    """
    lines = [
        f"method        {result.method} (p={result.order})",
        f"forced zeros  {len(result.pattern)}",
        f"nonzeros      {result.B.nnz}",
        f"alpha(B)      {_value(result.alpha_B, digits)}",
        f"objective     {_value(result.objective, digits)}",
    ]
    if result.relaxation_k is not None:
        lines.append(f"relaxed k     {_value(result.relaxation_k, digits)}")
    if result.seed is not None:
        lines.append(f"seed          {result.seed}")
    lines.append(format_certificate(result.certificate, digits))
    lines.append("B =")
    lines.append(format_matrix(result.B.weights, digits))
    for message in result.warnings:
        lines.append(f"warning: {message}")
    return "\n".join(lines)
