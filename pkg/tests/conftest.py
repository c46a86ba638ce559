import numpy as np
import pytest
import torch

from cardgan.config import ArchConfig, NoiseGateConfig
from cardgan.models import new_checkpoint

# keep CPU math reproducible and cheap on small runners
torch.set_num_threads(1)

ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(name): acceptance criterion this test realizes")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        marker = item.get_closest_marker("criterion")
        if marker:
            ACCEPTANCE_RESULTS.append((marker.args[0], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, passed in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}")


@pytest.fixture(scope="session")
def tiny_arch():
    """16-res toy architecture: L=6, five noise sites (4, 8, 8, 16, 16)."""
    return ArchConfig(output_res=16, latent_dim=16, channel_base=256, channel_max=8,
                      mapping_layers=2)


@pytest.fixture(scope="session")
def tiny_gates(tiny_arch):
    """Coarse noise suppressed: off at 4 and 8, on at 16."""
    return NoiseGateConfig.coarse_suppressed(tiny_arch, max_off_res=8)


@pytest.fixture(scope="session")
def tiny_ckpt(tiny_arch, tiny_gates):
    ckpt = new_checkpoint(tiny_arch, tiny_gates, seed=5)
    ckpt.estimate_w_mean(n_samples=500, seed=0)
    return ckpt


@pytest.fixture(scope="session")
def gate_arch():
    """64-res toy with the production gate layout (off up to 32, on at 64)."""
    return ArchConfig(output_res=64, latent_dim=32, channel_base=512, channel_max=8,
                      mapping_layers=2)


@pytest.fixture(scope="session")
def gate_ckpt(gate_arch):
    ckpt = new_checkpoint(gate_arch, NoiseGateConfig.coarse_suppressed(gate_arch), seed=7)
    ckpt.estimate_w_mean(n_samples=500, seed=0)
    return ckpt


def random_w_plus(arch, seed=0, scale=1.0):
    rng = np.random.default_rng(seed)
    return (scale * rng.standard_normal((arch.num_layers, arch.latent_dim))).astype(np.float32)
