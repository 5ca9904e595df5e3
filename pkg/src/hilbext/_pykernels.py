"""Pure-Python sign kernels.

Permutations are 0-based image sequences (``images[i]`` is the image of ``i``).
Subsets of ``{0, ..., n-1}`` are bit masks.
"""


def perm_sign(images):
    n = len(images)
    inv = 0
    for a in range(n):
        ia = images[a]
        for b in range(a + 1, n):
            if ia > images[b]:
                inv += 1
    return -1 if inv & 1 else 1


def koszul_sign(images, degrees):
    n = len(images)
    if len(degrees) != n:
        raise ValueError("length mismatch between permutation and degrees")
    odd = [d & 1 for d in degrees]
    inv = 0
    for a in range(n):
        if not odd[a]:
            continue
        ia = images[a]
        for b in range(a + 1, n):
            if odd[b] and ia > images[b]:
                inv += 1
    return -1 if inv & 1 else 1


def eps_sigma_mask(images, mask):
    inv = 0
    n = len(images)
    for a in range(n):
        if not (mask >> a) & 1:
            continue
        ia = images[a]
        for b in range(a + 1, n):
            if (mask >> b) & 1 and ia > images[b]:
                inv += 1
    return -1 if inv & 1 else 1


def eps_m_mask(m, mask):
    below = bin(mask & ((1 << m) - 1)).count("1")
    return -1 if below & 1 else 1


def image_mask(images, mask):
    out = 0
    for a in range(len(images)):
        if (mask >> a) & 1:
            out |= 1 << images[a]
    return out


def d_squared_violations(n):
    """Triples ``(J, i, j)`` breaking eps(i,J)eps(j,J-i) + eps(j,J)eps(i,J-j) = 0."""
    bad = []
    for J in range(1 << n):
        members = [k for k in range(n) if (J >> k) & 1]
        for x in range(len(members)):
            i = members[x]
            for y in range(x + 1, len(members)):
                j = members[y]
                lhs = (eps_m_mask(i, J) * eps_m_mask(j, J & ~(1 << i))
                       + eps_m_mask(j, J) * eps_m_mask(i, J & ~(1 << j)))
                if lhs != 0:
                    bad.append((J, i, j))
    return bad


def equivariance_violations(images, n):
    """Pairs ``(I, i)`` with i not in I breaking the commutation identity.

    With J = I + {i}: eps(i,J) * eps(sigma,I) == eps(sigma,J) * eps(sigma(i), sigma(J)).
    """
    bad = []
    full = (1 << n) - 1
    for I in range(1, full):
        e_I = eps_sigma_mask(images, I)
        sI = image_mask(images, I)
        for i in range(n):
            if (I >> i) & 1:
                continue
            J = I | (1 << i)
            sJ = sI | (1 << images[i])
            lhs = eps_m_mask(i, J) * e_I
            rhs = eps_sigma_mask(images, J) * eps_m_mask(images[i], sJ)
            if lhs != rhs:
                bad.append((I, i))
    return bad
