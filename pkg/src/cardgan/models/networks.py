"""Mapping, synthesis, and discriminator networks.

The generator is a style-based architecture: a fully connected mapping
network turns the input latent into an intermediate latent, which
modulates every synthesis convolution through weight demodulation.  Each
synthesis layer adds per-channel-weighted spatial noise; a per-resolution
gate can force that contribution to exactly zero (see
:class:`cardgan.config.NoiseGateConfig`).
"""

from __future__ import annotations

import math

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..config import ArchConfig, NoiseGateConfig
from ..errors import InvalidArgument


def normalize_z(z: torch.Tensor, eps: float = 1e-8) -> torch.Tensor:
    """Project z onto the hypersphere of radius sqrt(D)."""
    return z * math.sqrt(z.shape[-1]) / (z.norm(dim=-1, keepdim=True) + eps)


class MappingNetwork(nn.Module):
    """Fully connected latent mapping with leaky-ReLU nonlinearities.

    Inputs are pre-normalized to the sqrt(D)-radius hypersphere, which
    stabilizes the input statistics of the first layer.
    """

    def __init__(self, latent_dim: int, num_layers: int = 8, normalize: bool = True):
        super().__init__()
        self.latent_dim = latent_dim
        self.normalize = normalize
        layers = []
        for _ in range(num_layers):
            fc = nn.Linear(latent_dim, latent_dim)
            nn.init.xavier_normal_(fc.weight)
            nn.init.zeros_(fc.bias)
            layers.append(fc)
        self.layers = nn.ModuleList(layers)

    def forward(self, z: torch.Tensor) -> torch.Tensor:
        if z.ndim != 2 or z.shape[1] != self.latent_dim:
            raise InvalidArgument(
                f"latent must have shape (N, {self.latent_dim}), got {tuple(z.shape)}"
            )
        w = normalize_z(z) if self.normalize else z
        for fc in self.layers:
            w = F.leaky_relu(fc(w), 0.2)
        return w


class ModulatedConv2d(nn.Module):
    """Equalized-lr convolution with per-sample style modulation.

    The style scales input channels of the kernel; demodulation rescales
    each output channel to unit expected norm.
    """

    def __init__(self, in_channels: int, out_channels: int, kernel_size: int,
                 latent_dim: int, demodulate: bool = True, eps: float = 1e-8):
        super().__init__()
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kernel_size = kernel_size
        self.demodulate = demodulate
        self.eps = eps
        self.weight = nn.Parameter(torch.randn(out_channels, in_channels, kernel_size, kernel_size))
        self.weight_scale = 1.0 / math.sqrt(in_channels * kernel_size * kernel_size)
        self.affine = nn.Linear(latent_dim, in_channels)
        nn.init.normal_(self.affine.weight, std=1.0 / math.sqrt(latent_dim))
        nn.init.ones_(self.affine.bias)

    def forward(self, x: torch.Tensor, w: torch.Tensor) -> torch.Tensor:
        b, _, h, width = x.shape
        style = self.affine(w)  # (B, in)
        weight = self.weight * self.weight_scale
        weights = weight.unsqueeze(0) * style.view(b, 1, -1, 1, 1)
        if self.demodulate:
            d = torch.rsqrt(weights.square().sum(dim=(2, 3, 4), keepdim=True) + self.eps)
            weights = weights * d
        x = x.reshape(1, b * self.in_channels, h, width)
        weights = weights.view(b * self.out_channels, self.in_channels, self.kernel_size, self.kernel_size)
        x = F.conv2d(x, weights, padding=self.kernel_size // 2, groups=b)
        return x.reshape(b, self.out_channels, h, width)


class SynthesisLayer(nn.Module):
    """Modulated conv + gated noise + bias + activation at one site."""

    def __init__(self, in_channels: int, out_channels: int, latent_dim: int,
                 resolution: int, up: bool, noise_init_std: float):
        super().__init__()
        self.resolution = resolution
        self.up = up
        self.conv = ModulatedConv2d(in_channels, out_channels, 3, latent_dim)
        self.noise_weight = nn.Parameter(torch.randn(out_channels) * noise_init_std)
        self.bias = nn.Parameter(torch.zeros(out_channels))

    def forward(self, x: torch.Tensor, w: torch.Tensor, noise: torch.Tensor,
                gate: float) -> torch.Tensor:
        if self.up:
            x = F.interpolate(x, scale_factor=2, mode="nearest")
        x = self.conv(x, w)
        # gate is a constant 0.0 or 1.0; at 0 the contribution is exactly zero
        x = x + gate * self.noise_weight.view(1, -1, 1, 1) * noise
        x = x + self.bias.view(1, -1, 1, 1)
        return F.leaky_relu(x, 0.2) * math.sqrt(2.0)


class SynthesisNetwork(nn.Module):
    """Noise-gated synthesis stack from a learned 4x4 constant to RGB."""

    def __init__(self, arch: ArchConfig):
        super().__init__()
        self.arch = arch
        d = arch.latent_dim
        self.const = nn.Parameter(torch.randn(arch.channels(4), 4, 4))
        layers = []
        in_ch = arch.channels(4)
        layers.append(SynthesisLayer(in_ch, in_ch, d, 4, up=False,
                                     noise_init_std=arch.noise_weight_init_std))
        prev_ch = in_ch
        for res in arch.resolutions[1:]:
            ch = arch.channels(res)
            layers.append(SynthesisLayer(prev_ch, ch, d, res, up=True,
                                         noise_init_std=arch.noise_weight_init_std))
            layers.append(SynthesisLayer(ch, ch, d, res, up=False,
                                         noise_init_std=arch.noise_weight_init_std))
            prev_ch = ch
        self.layers = nn.ModuleList(layers)
        self.to_rgb = ModulatedConv2d(prev_ch, arch.img_channels, 1, d, demodulate=False)
        self.rgb_bias = nn.Parameter(torch.zeros(arch.img_channels))

    def forward(self, w_plus: torch.Tensor, noise: dict[str, torch.Tensor],
                gates: NoiseGateConfig) -> torch.Tensor:
        """w_plus: (B, L, D); noise maps site name -> (res, res) or (B, 1, res, res)."""
        arch = self.arch
        if w_plus.ndim != 3 or w_plus.shape[1] != arch.num_layers or w_plus.shape[2] != arch.latent_dim:
            raise InvalidArgument(
                f"w_plus must have shape (N, {arch.num_layers}, {arch.latent_dim}), got {tuple(w_plus.shape)}"
            )
        gates.validate_for(arch)
        b = w_plus.shape[0]
        x = self.const.unsqueeze(0).expand(b, -1, -1, -1)
        for site, layer in zip(arch.noise_sites, self.layers):
            buf = noise.get(site.name)
            if buf is None:
                raise InvalidArgument(f"missing noise buffer for site {site.name!r}")
            if buf.ndim == 2:
                buf = buf.view(1, 1, *buf.shape)
            if buf.shape[-2:] != (site.resolution, site.resolution):
                raise InvalidArgument(
                    f"noise buffer {site.name!r} has shape {tuple(buf.shape[-2:])}, "
                    f"expected ({site.resolution}, {site.resolution})"
                )
            gate = 1.0 if gates.enabled(site.resolution) else 0.0
            x = layer(x, w_plus[:, site.style_index], buf, gate)
        img = self.to_rgb(x, w_plus[:, arch.num_layers - 1])
        return img + self.rgb_bias.view(1, -1, 1, 1)


class EqualConv2d(nn.Module):
    """Plain convolution with runtime weight scaling (equalized lr)."""

    def __init__(self, in_channels: int, out_channels: int, kernel_size: int):
        super().__init__()
        self.weight = nn.Parameter(torch.randn(out_channels, in_channels, kernel_size, kernel_size))
        self.bias = nn.Parameter(torch.zeros(out_channels))
        self.scale = 1.0 / math.sqrt(in_channels * kernel_size * kernel_size)
        self.padding = kernel_size // 2

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return F.conv2d(x, self.weight * self.scale, self.bias, padding=self.padding)


class DiscriminatorBlock(nn.Module):
    def __init__(self, in_channels: int, out_channels: int):
        super().__init__()
        self.conv0 = EqualConv2d(in_channels, in_channels, 3)
        self.conv1 = EqualConv2d(in_channels, out_channels, 3)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = F.leaky_relu(self.conv0(x), 0.2) * math.sqrt(2.0)
        x = F.leaky_relu(self.conv1(x), 0.2) * math.sqrt(2.0)
        return F.avg_pool2d(x, 2)


class Discriminator(nn.Module):
    """Standard convolutional adversary mirroring the generator's schedule."""

    def __init__(self, arch: ArchConfig):
        super().__init__()
        self.arch = arch
        self.from_rgb = EqualConv2d(arch.img_channels, arch.channels(arch.output_res), 1)
        blocks = []
        for res in reversed(arch.resolutions[1:]):
            blocks.append(DiscriminatorBlock(arch.channels(res), arch.channels(res // 2)))
        self.blocks = nn.ModuleList(blocks)
        ch4 = arch.channels(4)
        self.final_conv = EqualConv2d(ch4, ch4, 3)
        self.final_fc = nn.Linear(ch4 * 16, 1)
        nn.init.xavier_normal_(self.final_fc.weight)
        nn.init.zeros_(self.final_fc.bias)

    def forward(self, img: torch.Tensor) -> torch.Tensor:
        res = self.arch.output_res
        if img.ndim != 4 or img.shape[1:] != (self.arch.img_channels, res, res):
            raise InvalidArgument(
                f"image batch must have shape (N, {self.arch.img_channels}, {res}, {res}), "
                f"got {tuple(img.shape)}"
            )
        x = F.leaky_relu(self.from_rgb(img), 0.2) * math.sqrt(2.0)
        for block in self.blocks:
            x = block(x)
        x = F.leaky_relu(self.final_conv(x), 0.2) * math.sqrt(2.0)
        return self.final_fc(x.flatten(1)).squeeze(1)
