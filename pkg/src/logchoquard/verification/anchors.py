"""Closed vocabulary of the statements a verification record can refer to.

Every record of a `VerificationReport` names one key of `ANCHORS`; the value
is the human readable statement that the record checks numerically.
"""

ANCHORS: dict[str, str] = {
    # Parameters and constants
    "parameter-envelope": (
        "N >= 2, 0 < s < 1, (1 - 2/N) s < tau < s and 0 < V_lower <= V_upper"
    ),
    "riesz-constant": (
        "Riesz kernel of the Poisson equation,"
        " C_N = 1 / (2^{N-1} pi^{N/2} Gamma(N/2))"
    ),
    "trudinger-moser-exponent": (
        "series upper bound alpha*_{s,N} of the fractional Trudinger-Moser"
        " exponent"
    ),
    "test-function-norm": (
        "norm of the plateau bounded by J_N(s, R) + K_N(s)"
    ),
    "test-function-potential": (
        "potential part of the norm of the plateau bounded by J_N(s, R)"
        " with the surface measure N omega_N"
    ),
    "test-function-seminorm": (
        "seminorm of the plateau bounded by K_N(s)"
    ),
    "threshold-T": (
        "threshold T_N(s) of the superquadratic lower bound, at R = 1/3"
    ),
    "beta-lower-bound": (
        "explicit lower bound beta_0 of the constant in"
        " f F >= beta t^(N/s)"
    ),
    "ratio-margin": "upper margin mu_N(s, tau) of F f' / f^2",
    "uniform-norm-cap": (
        "||u_mu||_V^{N/s} < s / (tau - (1 - 2/N) s), uniformly in mu"
    ),
    "decay-exponent": "u(x) <~ |x|^{-a} with a = s (2N + 3) / (2 (N - s))",
    # Nonlinearity
    "growth-at-zero": "f(t) = o(t^{N/s - 1}) as t -> 0+",
    "exponential-growth": "f(t) <= b_1 + b_2 Phi_{N,s}(alpha t^{N/(N-s)})",
    "ratio-window": "1 - s + tau <= F f' / f^2 <= 1 + mu_N(s, tau)",
    "ratio-limit": "F f' / f^2 -> 1 as t -> infinity",
    "beta-growth": "f(t) F(t) >= beta t^{N/s} for t >= T_N(s)",
    "small-growth-consequence": (
        "f(t) <= eps t^{N/s - 1}"
        " + C_eps t^{N/s - 1} Phi_{N,s}(alpha t^{N/(N-s)})"
    ),
    "primitive-bound": "F(t) <= (s - tau) t f(t)",
    "primitive-small": "F(t) <= eps t f(t) for t >= M_eps",
    # Radial machinery
    "seminorm-radial-reduction": (
        "radial reduction of the Gagliardo seminorm with kernel"
        " r^{N-1} t^{N-1} (r^2 + t^2) / |r^2 - t^2|^{N+1}"
    ),
    "trudinger-moser-integrability": (
        "Phi_{N,s}(alpha |u|^{N/(N-s)}) integrable for u in W^{s,N/s}"
    ),
    # Kernels
    "kernel-inequality": (
        "(t^{-mu} - 1) / mu >= log(1/t) on (0, 1] and"
        " (t^{-mu} - 1) / mu <= C_nu t^{-nu}"
    ),
    "kernel-convergence": "G_mu -> log(1/|.|) locally uniformly as mu -> 0",
    "phi-power-bound": (
        "Phi_{N,s}(alpha t^{N/(N-s)})^r"
        " <= C_beta Phi_{N,s}(alpha beta t^{N/(N-s)})"
    ),
    "hls-inequality": (
        "Hardy-Littlewood-Sobolev: int (|.|^{-mu} * f) h <= C ||f||_q ||h||_r"
    ),
    # Energy
    "energy-expanded-form": (
        "J_mu = (s/N)||u||^{N/s} + C_N/(2mu) (int F)^2"
        " - C_N/(2mu) int int |x-y|^{-mu} F F"
    ),
    "gateaux-derivative": "directional derivative of J_mu along hat functions",
    "ff-transform": (
        "F(u)/f(u) transform: mixed pairing <= (s - tau) [u]^{N/s}"
    ),
    "h-transform": (
        "||t - (N/2s) F(t)/f(t)||_V^{N/s} <= gamma_N(s, tau) < 1"
    ),
    "ps-bound": "(tau - (1 - 2/N) s) ||u||_V^{N/s} <= 2 c_mu",
    "psi-growth": "Psi(t) >= Psi(1) t^{2/(s - tau)} for t >= 1",
    # Mountain pass
    "mountain-pass-endpoint": "J_mu(e) < 0 with ||e|| > rho",
    "mountain-pass-rim": "J_mu >= eta > 0 on the sphere of radius rho",
    "mountain-pass-level": "J_mu'(u_mu) = 0 at the level c_mu > 0",
    "level-bound": "c_mu < s / (2N)",
    "ray-maximum": "sup_t J_mu(t w / ||w||) < s / (2N) for the plateau",
    "continuation-limit": (
        "u_mu -> u_0, weak solution of the logarithmic problem, u_0 != 0"
    ),
    "log-energy-finite": "int int log(1/|x-y|) F(u_0(x)) F(u_0(y)) finite",
    # Poisson potential
    "potential-asymptotics": "phi_u(x) = -C_N ||F(u)||_1 log|x| + o(1)",
    "potential-log-moment": "int log(1 + |x|) F(u) finite",
    "lgamma-membership": "phi_u in L_gamma for every gamma > 0",
    "gmu-estimate": (
        "(G_mu * F(u))(x) <= (C/mu) ((|x|/2)^{-mu} - 1) + C_0"
    ),
    "primitive-decay": "F(u(x)) <~ |x|^{-N (2N + 3) / (2 (N - s))}",
    "laplace-residual": "-Delta phi_u = F(u) in the plane",
    "holder-bound": "right-hand side of the local Holder seminorm estimate",
}
