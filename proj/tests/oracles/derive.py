"""Reference values for the C++ tests, computed independently with numpy/scipy.

Run:  python3 tests/oracles/derive.py
The printed numbers are pasted into tests/*.cpp; rerun after changing any
default that feeds them.
"""
import numpy as np
from scipy import signal, linalg, integrate

DT = 0.01
np.set_printoptions(precision=17)


def show(name, value):
    if np.ndim(value):
        print(f"{name} = {{{', '.join(repr(float(v)) for v in value)}}}")
    else:
        print(f"{name} = {float(value)!r}")


# --- command: HPF split -------------------------------------------------
wc = 2 * np.pi * 0.2
b, a = signal.bilinear([1.0, 0.0], [1.0, wc], fs=1 / DT)
show("hpf_b", b)
show("hpf_a", a)
show("hpf_first_sample", b[0])
_, h = signal.freqz(b, a, worN=[0.2], fs=1 / DT)
show("hpf_mag_at_fc_discrete", abs(h[0]))
# steady-state amplitude from a simulated sinusoid at fc (last 5 periods)
t = np.arange(0, 200, DT)
y = signal.lfilter(b, a, np.sin(2 * np.pi * 0.2 * t))
show("hpf_sim_amplitude_at_fc", np.max(np.abs(y[-2500:])))

# --- plant ------------------------------------------------------------
show("zoh_sc_first_step", 1 - np.exp(-0.5))
show("soc_round_trip", 0.97 ** 2)

# swing + governor from rest, dP = 0.05 pu, explicit Euler at DT
H, D, R, Tg = 6.0, 3.0, 0.05, 0.3
f, g = 0.0, 0.0
fs = []
for _ in range(int(60 / DT)):
    f, g = f + DT * (g - 0.05 - D * f) / (2 * H), g + DT * (-f / R - g) / Tg
    fs.append(f)
show("grid_first_step_freq", fs[0])
show("grid_slope", -0.05 / (2 * H))
show("grid_steady_state", -0.05 / (D + 1 / R))
# continuous solution, to bound the Euler discretization error
sol = integrate.solve_ivp(
    lambda _, x: [(x[1] - 0.05 - D * x[0]) / (2 * H), (-x[0] / R - x[1]) / Tg],
    (0, 60), [0, 0], rtol=1e-11, atol=1e-14, t_eval=[60])
show("grid_ode_at_60s", sol.y[0, -1])
show("grid_euler_at_60s", fs[-1])

# --- estimation ------------------------------------------------------
phi = 0.999
F = np.array([[1, DT], [0, phi]])
Hm = np.array([[1.0, 0.0]])
Q = np.diag([1e-4, 1.0])
Rm = np.array([[1.0]])
# steady-state prior covariance from the filtering Riccati equation
P = linalg.solve_discrete_are(F.T, Hm.T, Q, Rm)
K = P @ Hm.T / (Hm @ P @ Hm.T + Rm)
Ppost = (np.eye(2) - K @ Hm) @ P
show("kf_steady_gain", K.ravel())
show("kf_steady_posterior", Ppost.ravel())


def dense_kf(meas, q=Q, r=Rm):
    z = np.zeros(2)
    Pk = np.eye(2)
    out = []
    for m in meas:
        z = F @ z
        Pk = F @ Pk @ F.T + q
        S = Hm @ Pk @ Hm.T + r
        Kk = Pk @ Hm.T / S
        z = z + (Kk * (m - Hm @ z)).ravel()
        Pk = (np.eye(2) - Kk @ Hm) @ Pk
        Pk = 0.5 * (Pk + Pk.T)
        out.append(z[1])
    return np.array(out)


step = np.where(np.arange(3000) >= 100, 10.0, 0.0)
r_step = dense_kf(step)
show("kf_step_peak", r_step.max())
show("kf_step_peak_index", int(r_step.argmax()))
show("kf_step_at_2000", r_step[2000])

# ramp tracking vs. a sliding least-squares slope (window 200 samples)
for slope in (5.0, 20.0, 100.0):
    k = np.arange(6000)
    meas = slope * k * DT
    est = dense_kf(meas)
    win = 200
    ls = np.polyfit(k[-win:] * DT, meas[-win:], 1)[0]
    show(f"kf_ramp_{int(slope)}_final", est[-1])
    show(f"kf_ramp_{int(slope)}_ls", ls)
# the smaller ramp noise (1e-2), to show why it was not used
est = dense_kf(5.0 * np.arange(6000) * DT, q=np.diag([1e-4, 1e-2]))
show("kf_ramp_5_final_q_1e-2", est[-1])

show("logistic_1", 1 / (1 + np.exp(-1)))
show("bias_decay", 4 * np.exp(-0.001))

# --- control: frequency responses -------------------------------------
def tf_mul(a, b):
    return np.polymul(a[0], b[0]), np.polymul(a[1], b[1])


def tf_add(a, b):
    return (np.polyadd(np.polymul(a[0], b[1]), np.polymul(b[0], a[1])),
            np.polymul(a[1], b[1]))


def freq_db(tf, f):
    _, h = signal.freqs(tf[0], tf[1], worN=2 * np.pi * np.atleast_1d(f))
    return 20 * np.log10(np.abs(h)), np.unwrap(np.angle(h)) * 180 / np.pi


kp, kd, fd, tsc = 1.0, 0.05, 5.0, 0.02
wd = 2 * np.pi * fd
hpf = ([1.0, 0.0], [1.0, wc])
pd = tf_add(([kp], [1.0]), ([kd * wd, 0.0], [1.0, wd]))
sc_ol = tf_mul(tf_mul(hpf, pd), ([1.0], [tsc, 1.0]))
mag, _ = freq_db(sc_ol, [0.01, 1.0])
show("sc_ol_db_0p01", mag[0])
show("sc_ol_db_1", mag[1])

ki, tl, krc, zeta, tess = 2.0, 20.0, 20.0, 0.2, 0.25
w = 2 * np.pi * 0.05
integ = ([ki], [1.0, 1 / tl])
rc = ([krc * 2 * zeta * w, 0.0], [1.0, 2 * zeta * w, w * w])
ess_ol = tf_mul(tf_add(integ, rc), ([1.0], [tess, 1.0]))
mag, ph = freq_db(ess_ol, [0.01, 0.05, 1.0])
show("ess_ol_db", mag)
show("ess_ol_phase", ph)
grid = 1e-3 * 10 ** (np.arange(0, 4 * 40 + 1) / 40)
mag, _ = freq_db(ess_ol, grid)
peaks = [i for i in range(1, len(mag) - 1) if mag[i] > mag[i - 1] and mag[i] > mag[i + 1]]
show("ess_ol_peak_freqs", grid[peaks])

# discrete resonant RC coefficients
b, a = signal.bilinear(rc[0], rc[1], fs=1 / DT)
show("rc_b", b)
show("rc_a", a)

# --- analysis: Welch reference on a deterministic signal --------------
n = 20000
t = np.arange(n) * DT
x = 3 * np.sin(2 * np.pi * 0.05 * t) + np.sin(2 * np.pi * 0.15 * t + 0.3) + 0.2 * np.cos(2 * np.pi * 7.3 * t)
seg = min(4096, n // 4)
fw, pw = signal.welch(x, fs=1 / DT, window="hann", nperseg=seg, noverlap=seg // 2,
                      detrend=False, scaling="density")
for i in (0, 1, 10, 15, 250, 2048):
    show(f"welch_{i}", pw[i])
show("welch_df", fw[1])
