import re


def num_string_converter(text: str):
    """Converts string numbers to numbers and returns normal text."""
    return int(text) if text.isdigit() else text


def id_sort_key(text: str):
    """Converts subject or sample ids such as 's10_2' into a natural sort key ('s2' sorts before 's10')."""
    return [num_string_converter(c) for c in re.split("(\\d+)", text)]
