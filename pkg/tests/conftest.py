import numpy as np
import pytest

from qturbo.qircc import subcode


@pytest.fixture(scope="session")
def u8():
    return subcode(7)


@pytest.fixture(scope="session")
def u6():
    return subcode(5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def ea_inner():
    from qturbo.convolutional import random_recursive_seed

    return random_recursive_seed(3, 1, 3, 2, seed=0, name="ea-inner")


@pytest.fixture(scope="session")
def bank_with_curves():
    from qturbo.qircc import SubcodeBank

    return SubcodeBank.default().with_curves(symbols=6000, seed=1)


@pytest.fixture(scope="session")
def substitute_system(ea_inner, bank_with_curves):
    """Rate-1/9 concatenation: QIRCC outer tuned to the EA inner code, 1200-qubit interleaver."""
    from qturbo.exit import inner_curve
    from qturbo.qircc import IrregularCode, optimize_weights
    from qturbo.turbo import ConcatenatedCode

    design = inner_curve(ea_inner, 0.33, symbols=6000, seed=2)
    opt = optimize_weights(bank_with_curves, design, 1 / 3)
    outer = IrregularCode.build(bank_with_curves, opt.weights, 1200)
    return ConcatenatedCode.build(outer, ea_inner, interleaver_seed=1), opt
