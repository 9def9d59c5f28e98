import json
import os


def ensure_directory(path):
    """Dizin yoksa oluştur"""
    if path:
        os.makedirs(path, exist_ok=True)


def to_json(data):
    """Sabit anahtar sırasıyla JSON metni üret"""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)


def format_fraction(value):
    """Oranı yüzde olarak formatla"""
    return f"{100.0 * value:.2f}%"


def parse_volume(text):
    """'5k' gibi veri hacmi ifadesini tamsayıya çevir"""
    text = text.strip().lower()
    if text.endswith('k'):
        return int(round(float(text[:-1]) * 1000))
    return int(text)


def parse_csv_list(text, cast=str):
    """Virgülle ayrılmış listeyi ayrıştır"""
    return [cast(item.strip()) for item in text.split(',') if item.strip()]
