"""
Rotation systems, flips and canonical codes
===========================================

"""

from triflip.kernel import canonical_code, faces, flip, flip_partner, format_rotation, mirror, parse

# the octahedron: each vertex lists its four neighbours clockwise
octahedron = parse("""n 6
0 : 1 5 3 4
1 : 0 4 2 5
2 : 1 4 3 5
3 : 0 5 2 4
4 : 0 3 2 1
5 : 0 1 2 3
""")
print(len(faces(octahedron)), "faces")

# flipping {0, 1} inserts the diagonal between the two opposite apexes
c, d = flip_partner(octahedron, 0, 1)
t = flip(octahedron, 0, 1)
print("new edge", (c, d))
print(format_rotation(t))

# flipping the new edge back gives the octahedron with the same labels
print(flip(t, c, d) == octahedron)

# canonical codes identify isomorphism classes
print(canonical_code(t) == canonical_code(octahedron))
print(canonical_code(mirror(t)) == canonical_code(t))
