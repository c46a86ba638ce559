from .losses import d_loss, g_loss, r1_penalty
from .ada import AdaState, ada_update
from .augment import AugmentationPipelineConfig, apply_augmentations
from .schedule import lr_schedule
from .loop import TrainConfig, Trainer

__all__ = [
    "AdaState",
    "AugmentationPipelineConfig",
    "TrainConfig",
    "Trainer",
    "ada_update",
    "apply_augmentations",
    "d_loss",
    "g_loss",
    "lr_schedule",
    "r1_penalty",
]
