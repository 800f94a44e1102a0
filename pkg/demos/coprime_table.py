"""Print the verdict for every two-cycle instance with n1, n2 <= 5 beside gcd(n1, n2)."""

import math

from popgame import decide, instances

print("n1 n2 gcd verdict  method")
for n1 in range(1, 6):
    for n2 in range(1, 6):
        v = decide(instances.gen_fig3(n1, n2))
        print(f"{n1:>2} {n2:>2} {math.gcd(n1, n2):>3} {v.kind:<8} {v.method}")
