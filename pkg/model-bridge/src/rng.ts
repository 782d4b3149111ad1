// SplitMix64, matching the stacking core's generator bit for bit so a
// seed produces the same shuffle on either side of the CSV boundary.
//
// All arithmetic mod 2^64:
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   output = z ^ (z >> 31)

const MASK64 = (1n << 64n) - 1n;
const GAMMA = 0x9e3779b97f4a7c15n;
const MIX1 = 0xbf58476d1ce4e5b9n;
const MIX2 = 0x94d049bb133111ebn;

export class SplitMix64 {
  private state: bigint;

  constructor(seed: bigint | number) {
    const s = BigInt(seed);
    if (s < 0n || s > MASK64) {
      throw new RangeError(`seed must be in [0, 2^64), got ${s}`);
    }
    this.state = s;
  }

  nextU64(): bigint {
    this.state = (this.state + GAMMA) & MASK64;
    let z = this.state;
    z = ((z ^ (z >> 30n)) * MIX1) & MASK64;
    z = ((z ^ (z >> 27n)) * MIX2) & MASK64;
    return z ^ (z >> 31n);
  }

  // Top 53 bits scaled by 2^-53, in [0, 1).
  nextFloat(): number {
    return Number(this.nextU64() >> 11n) / 2 ** 53;
  }

  // Modulo draw; bias is negligible for the bounds used here.
  nextBelow(n: number): number {
    if (!Number.isInteger(n) || n <= 0) {
      throw new RangeError(`bound must be a positive integer, got ${n}`);
    }
    return Number(this.nextU64() % BigInt(n));
  }

  // Fisher-Yates from the last index down.
  shuffle<T>(items: T[]): T[] {
    for (let i = items.length - 1; i > 0; i--) {
      const j = this.nextBelow(i + 1);
      [items[i], items[j]] = [items[j], items[i]];
    }
    return items;
  }
}
