import math


def lr_schedule(epoch, total_epochs, lr_peak, step=0, steps_per_epoch=1):
    """Epoch 0 içinde adım başına doğrusal ısınma (0 -> lr_peak), sonra epoch başına kosinüs azalma.

    Epoch 1'in başında lr_peak, son epoch'ta (total_epochs - 1) tam 0 verir.
    """
    if not 0 <= epoch < total_epochs:
        raise ValueError(f"epoch [0, {total_epochs}) aralığında olmalı, {epoch} geldi")
    if epoch == 0:
        return lr_peak * step / max(1, steps_per_epoch)
    progress = (epoch - 1) / max(1, total_epochs - 2)
    return lr_peak * (1.0 + math.cos(math.pi * progress)) / 2.0
