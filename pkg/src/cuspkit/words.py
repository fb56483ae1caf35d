"""Words in group generators.

A word is a tuple of nonzero signed integers: +i is the i-th generator
(1-indexed), -i its inverse.  The empty tuple is the identity.  Words are
immutable so they can serve as dict keys and canonical vertex labels.
"""

import string


def inverse(word):
    return tuple(-x for x in reversed(word))


def free_reduce(word):
    """Cancel adjacent letter/inverse pairs until none remain."""
    out = []
    for x in word:
        if x == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def concat(*words):
    out = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def conjugate(word, by):
    """by * word * by^-1, freely reduced."""
    return concat(by, word, inverse(by))


def shortlex_key(word):
    # sort order: length first, then letters with a < A < b < B < ...
    return (len(word), tuple((abs(x), 0 if x > 0 else 1) for x in word))


def shortlex_min_cyclic(word):
    """Canonical representative of a relator: smallest shortlex word among
    all cyclic rotations of the cyclically reduced word and of its inverse."""
    w = cyclic_reduce(word)
    if not w:
        return w
    candidates = []
    for u in (w, inverse(w)):
        for i in range(len(u)):
            candidates.append(u[i:] + u[:i])
    return min(candidates, key=shortlex_key)


DEFAULT_NAMES = tuple(string.ascii_lowercase)


def parse_word(text, names):
    """Parse a word like "a b A B" (uppercase = inverse); spaces optional
    when all generator names are single characters."""
    index = {name: i + 1 for i, name in enumerate(names)}
    stripped = text.strip()
    if not stripped or stripped == "1":
        return ()
    if any(ch.isspace() for ch in stripped) or any(len(n) > 1 for n in names):
        tokens = stripped.split()
    else:
        tokens = list(stripped)
    letters = []
    for tok in tokens:
        if tok in index:
            letters.append(index[tok])
        elif tok.lower() in index and tok != tok.lower():
            letters.append(-index[tok.lower()])
        else:
            raise ValueError(f"unknown generator {tok!r}")
    return tuple(letters)


def format_word(word, names=DEFAULT_NAMES):
    if not word:
        return "1"
    parts = []
    for x in word:
        name = names[abs(x) - 1]
        parts.append(name if x > 0 else name.upper())
    return " ".join(parts)


def enumerate_words(n_generators, max_length):
    """All freely reduced words of length <= max_length, in shortlex order."""
    letters = [i for i in range(1, n_generators + 1)]
    letters = sorted(letters + [-x for x in letters], key=lambda x: (abs(x), 0 if x > 0 else 1))
    frontier = [()]
    yield ()
    for _ in range(max_length):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        for w in nxt:
            yield w
        frontier = nxt
