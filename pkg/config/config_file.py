import dataclasses
import typing

from utils.exceptions import ConfigError


def read_key_values(path):
    """UTF-8 key=value dosyasını oku ('#' yorum satırları atlanır)"""
    values = {}
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise ConfigError(f"yapılandırma dosyası okunamadı: {path} ({e})") from e
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        if '=' not in stripped:
            raise ConfigError(f"{path}:{number}: 'key=value' bekleniyordu")
        key, value = stripped.split('=', 1)
        values[key.strip()] = value.strip()
    return values


def write_key_values(path, values):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for key, value in values.items():
            f.write(f"{key}={format_value(value)}\n")


def format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (tuple, list)):
        return ",".join(str(v) for v in value)
    if value is None:
        return "none"
    return str(value)


def _coerce(text, annotation, key):
    origin = typing.get_origin(annotation)
    args = typing.get_args(annotation)
    if origin is typing.Union:
        if text.lower() in ("none", ""):
            return None
        annotation = next(a for a in args if a is not type(None))
        return _coerce(text, annotation, key)
    if origin in (tuple, list):
        item_type = args[0] if args else str
        items = [_coerce(item.strip(), item_type, key) for item in text.split(',') if item.strip()]
        return tuple(items) if origin is tuple else items
    if annotation is bool:
        lowered = text.lower()
        if lowered in ("true", "1", "yes", "on"):
            return True
        if lowered in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"{key}: boolean bekleniyordu, {text!r} geldi")
    if annotation in (int, float, str):
        try:
            return annotation(text)
        except ValueError as e:
            raise ConfigError(f"{key}: {annotation.__name__} bekleniyordu, {text!r} geldi") from e
    raise ConfigError(f"{key}: desteklenmeyen alan tipi {annotation}")


def apply_overrides(config, values, ignore_unknown=False):
    """Metin değerleri dataclass alan tiplerine çevirip uygula"""
    hints = typing.get_type_hints(type(config))
    names = {f.name for f in dataclasses.fields(config)}
    updates = {}
    for key, value in values.items():
        if key not in names:
            if ignore_unknown:
                continue
            raise ConfigError(f"bilinmeyen yapılandırma anahtarı: {key}")
        updates[key] = _coerce(value, hints[key], key) if isinstance(value, str) else value
    return dataclasses.replace(config, **updates)


def config_to_values(config):
    return {f.name: getattr(config, f.name) for f in dataclasses.fields(config)}
