"""
Funciones especiales para el modelo de detección: Bessel modificada en escala
logarítmica, gamma incompleta regularizada y función Q de Marcum generalizada
"""

import math
from dataclasses import dataclass
from numbers import Integral
from typing import Callable, Tuple, Union

from scipy.special import gammainc, gammaincc, gammaln, ive

from config import SPECFUN_CONFIG
from utils.errors import DomainError, SeriesConvergenceError

# Valor centinela de log I_n(0) para n >= 1; exp() lo convierte en 0 exacto
LOG_UNDERFLOW = -math.inf


@dataclass(frozen=True)
class MarcumOrder:
    """Orden M de la función Q_M de Marcum (entero positivo)"""
    order: int

    def __post_init__(self):
        if isinstance(self.order, bool) or not isinstance(self.order, Integral) or self.order < 1:
            raise DomainError(f"El orden de Marcum debe ser un entero >= 1, recibido {self.order!r}")


def _as_order(m: Union[MarcumOrder, int]) -> int:
    if isinstance(m, MarcumOrder):
        return int(m.order)
    return int(MarcumOrder(m).order)


def _check_non_negative(name: str, value: float) -> float:
    value = float(value)
    if math.isnan(value) or value < 0.0:
        raise DomainError(f"El argumento '{name}' debe ser no negativo, recibido {value!r}")
    return value


def is_log_underflow(value: float) -> bool:
    """Indica si un logaritmo es el centinela de subdesbordamiento"""
    return value == LOG_UNDERFLOW


def log_modified_bessel_i(order: int, x: float) -> float:
    """
    Calcula ln I_order(x) sin desbordamiento, a partir de la versión escalada
    ive(order, x) = I_order(x) e^{-x}.

    Args:
        order: Orden entero no negativo
        x: Argumento no negativo

    Returns:
        ln I_order(x); para x = 0 devuelve 0 si order = 0 y LOG_UNDERFLOW si order >= 1
    """
    if isinstance(order, bool) or not isinstance(order, Integral) or order < 0:
        raise DomainError(f"El orden de Bessel debe ser un entero no negativo, recibido {order!r}")
    x = _check_non_negative("x", x)

    if x == 0.0:
        return 0.0 if order == 0 else LOG_UNDERFLOW

    scaled = float(ive(order, x))
    if scaled <= 0.0:
        return LOG_UNDERFLOW
    return math.log(scaled) + x


def upper_regularized_gamma(s: float, x: float) -> float:
    """
    Función gamma incompleta superior regularizada Q(s, x) = Γ(s, x) / Γ(s).

    Args:
        s: Parámetro de forma estrictamente positivo
        x: Límite inferior de la cola, no negativo

    Returns:
        Valor en [0, 1], igual a 1 en x = 0
    """
    s = float(s)
    if math.isnan(s) or s <= 0.0:
        raise DomainError(f"El parámetro 's' debe ser estrictamente positivo, recibido {s!r}")
    x = _check_non_negative("x", x)
    if x == 0.0:
        return 1.0
    return float(gammaincc(s, x))


def _poisson_log_weight(n: int, lam: float, log_lam: float) -> float:
    return -lam + n * log_lam - float(gammaln(n + 1.0))


def _sum_from_peak(order: int, a: float, b: float, start: int,
                   term_at: Callable[[int], Tuple[float, float]],
                   ratio_up: Callable[[int], float],
                   ratio_down: Callable[[int], float],
                   converged: Callable[[float, float, float], bool]) -> float:
    """
    Suma una serie de términos no negativos desde el índice `start` hacia
    arriba y después hacia abajo hasta n = 0.

    `term_at(n)` devuelve (término, base) y la cola restante en cada sentido
    se acota por base · r / (1 - r), con r la cota del cociente entre términos
    consecutivos, decreciente al alejarse de `start`. `converged(término, cola,
    total)` decide el corte. El límite de términos cuenta los dos sentidos.
    """
    max_terms = SPECFUN_CONFIG["series_max_terms"]
    total = 0.0
    term = 0.0
    count = 0

    for direction, ratio in ((1, ratio_up), (-1, ratio_down)):
        n = start if direction > 0 else start - 1
        while n >= 0:
            if count >= max_terms:
                raise SeriesConvergenceError(order, a, b, max_terms, term)
            term, base = term_at(n)
            total += term
            count += 1
            r = ratio(n)
            if r < 1.0 and converged(term, base * r / (1.0 - r), total):
                break
            n += direction

    return total


def marcum_q(m: Union[MarcumOrder, int], a: float, b: float) -> float:
    """
    Función Q de Marcum generalizada mediante la serie de pesos de Poisson
    sobre colas gamma regularizadas:

        Q_m(a, b) = sum_n e^{-a²/2} (a²/2)^n / n! · Q(m + n, b²/2)

    La suma arranca en el modo de Poisson ⌊a²/2⌋ y avanza en ambos sentidos
    hasta que el término más una cota geométrica de la cola de pesos cae por
    debajo de la tolerancia configurada.

    Args:
        m: Orden (MarcumOrder o entero >= 1)
        a: Parámetro de no centralidad, no negativo
        b: Umbral, no negativo

    Returns:
        Q_m(a, b) en [0, 1]
    """
    order = _as_order(m)
    a = _check_non_negative("a", a)
    b = _check_non_negative("b", b)

    if b == 0.0:
        return 1.0

    lam = 0.5 * a * a
    y = 0.5 * b * b
    if lam == 0.0:
        return upper_regularized_gamma(order, y)

    tol = SPECFUN_CONFIG["series_tol"]
    log_lam = math.log(lam)

    def term_at(n: int) -> Tuple[float, float]:
        weight = math.exp(_poisson_log_weight(n, lam, log_lam))
        return weight * float(gammaincc(order + n, y)), weight

    total = _sum_from_peak(
        order, a, b, int(lam),
        term_at,
        ratio_up=lambda n: lam / (n + 1),
        ratio_down=lambda n: n / lam,
        converged=lambda term, tail, _: term + tail < tol,
    )
    return min(max(total, 0.0), 1.0)


def marcum_q_complement(m: Union[MarcumOrder, int], a: float, b: float) -> float:
    """
    Complemento 1 - Q_m(a, b) calculado directamente con la serie de colas
    gamma inferiores, exacto en términos relativos cuando Q_m es casi 1.

    Los términos w_n P(m + n, b²/2) alcanzan su máximo cerca de
    min(a²/2, sqrt(a² b²/4)); la suma parte de ahí en ambos sentidos.

    Args:
        m: Orden (MarcumOrder o entero >= 1)
        a: Parámetro de no centralidad, no negativo
        b: Umbral, no negativo

    Returns:
        1 - Q_m(a, b) en [0, 1]
    """
    order = _as_order(m)
    a = _check_non_negative("a", a)
    b = _check_non_negative("b", b)

    if b == 0.0:
        return 0.0

    lam = 0.5 * a * a
    y = 0.5 * b * b
    if lam == 0.0:
        return float(gammainc(order, y))

    tol = SPECFUN_CONFIG["series_tol"]
    log_lam = math.log(lam)

    def term_at(n: int) -> Tuple[float, float]:
        term = math.exp(_poisson_log_weight(n, lam, log_lam)) * float(gammainc(order + n, y))
        return term, term

    # P(s + 1, y) <= min(1, y / (s + 1)) P(s, y) y P(s - 1, y) <= (1 + s / y) P(s, y)
    total = _sum_from_peak(
        order, a, b, int(min(lam, math.sqrt(lam * y))),
        term_at,
        ratio_up=lambda n: lam / (n + 1) * min(1.0, y / (order + n + 1)),
        ratio_down=lambda n: n * (1.0 + (order + n) / y) / lam,
        converged=lambda term, tail, total: tail <= tol * total,
    )
    return min(max(total, 0.0), 1.0)


def marcum_q_difference(a: float, b: float) -> float:
    """
    Núcleo Q_2(a, b) - Q_1(a, b) = (b/a) e^{-(a²+b²)/2} I_1(ab), evaluado con el
    término de recurrencia en escala logarítmica para evitar la cancelación.

    Args:
        a: Parámetro de no centralidad, no negativo
        b: Umbral, no negativo

    Returns:
        Diferencia no negativa; en a = 0 se usa el límite (b²/2) e^{-b²/2}
    """
    a = _check_non_negative("a", a)
    b = _check_non_negative("b", b)

    if b == 0.0:
        return 0.0
    if a == 0.0:
        y = 0.5 * b * b
        return y * math.exp(-y)

    log_bessel = log_modified_bessel_i(1, a * b)
    if is_log_underflow(log_bessel):
        return 0.0
    log_value = math.log(b) - math.log(a) - 0.5 * (a * a + b * b) + log_bessel
    return math.exp(log_value)
