#include <algorithm>

#include "ahltl/corpus.hpp"

namespace ahltl {

namespace {

// Hand-written small reconstructions; `ahltl corpus --out DIR` writes them next to each other.
const std::vector<CorpusFile> kFiles{
    {"prog1.kr", R"corpus(# int l = 0; if (h = 0) l := l + 1; else l := 1;
# l0 and l1 hold when l is 0 and 1; li is the low input, fixed for every run.
aps: li l0 l1
init: start
state start {li l0}
state h0_inc {li l1}
state h1_set {li l1}
trans start -> h0_inc
trans start -> h1_set
trans h0_inc -> h0_inc
trans h1_set -> h1_set
)corpus"},
    {"prog2.kr", R"corpus(# int l = 0; if (h = 0) { reg := l + 1; l := reg; } else l := 1;
# The register write leaves l unchanged, so the h = 0 run reaches l = 1 one step later.
aps: li l0 l1
init: start
state start {li l0}
state h0_reg {li l0}
state h0_store {li l1}
state h1_set {li l1}
trans start -> h0_reg
trans h0_reg -> h0_store
trans start -> h1_set
trans h0_store -> h0_store
trans h1_set -> h1_set
)corpus"},
    {"selfloop.kr", R"corpus(# Structure with a self-loop: from the unlabelled start, either stay in the b-state for a while
# or go to the a-state directly.
aps: a b
init: start
state start {}
state sb {b}
state sa {a}
trans start -> sb
trans start -> sa
trans sb -> sb
trans sb -> sa
trans sa -> sa
)corpus"},
    {"cbf.kr", R"corpus(# Common branch factorization, source (s_) and target (t_) in one structure.
#   source: if (x) { y := 1; a := 1; } else { y := 1; a := 0; }
#   target: y := 1; if (x) a := 1; else a := 0;
aps: x y a
init: s_br1 s_br0 t_in1 t_in0
state s_br1 {x}
state s_y1 {x y}
state s_a1 {x y a}
state s_br0 {}
state s_y0 {y}
state s_a0 {y}
state t_in1 {x}
state t_y1 {x y}
state t_br1 {x y}
state t_a1 {x y a}
state t_in0 {}
state t_y0 {y}
state t_br0 {y}
state t_a0 {y}
trans s_br1 -> s_y1
trans s_y1 -> s_a1
trans s_a1 -> s_a1
trans s_br0 -> s_y0
trans s_y0 -> s_a0
trans s_a0 -> s_a0
trans t_in1 -> t_y1
trans t_y1 -> t_br1
trans t_br1 -> t_a1
trans t_a1 -> t_a1
trans t_in0 -> t_y0
trans t_y0 -> t_br0
trans t_br0 -> t_a0
trans t_a0 -> t_a0
)corpus"},
    {"lp.kr", R"corpus(# Loop peeling for n in {1, 2} (n2 holds when n = 2); s1 and s2 hold when s is 1 and 2.
#   source: s := 0; i := 0; while (i < n) { s := s + 1; i := i + 1; }
#   target: s := 0; i := 0; s := s + 1; i := i + 1; while (i < n) { s := s + 1; i := i + 1; }
aps: n2 s1 s2
init: s1_init s2_init t1_init t2_init
state s1_init {}
state s1_test1 {}
state s1_body1 {s1}
state s1_inc1 {s1}
state s1_test2 {s1}
state s1_exit {s1}
state s2_init {n2}
state s2_test1 {n2}
state s2_body1 {n2 s1}
state s2_inc1 {n2 s1}
state s2_test2 {n2 s1}
state s2_body2 {n2 s2}
state s2_inc2 {n2 s2}
state s2_test3 {n2 s2}
state s2_exit {n2 s2}
state t1_init {}
state t1_peel {s1}
state t1_inc1 {s1}
state t1_test2 {s1}
state t1_exit {s1}
state t2_init {n2}
state t2_peel {n2 s1}
state t2_inc1 {n2 s1}
state t2_test2 {n2 s1}
state t2_body2 {n2 s2}
state t2_inc2 {n2 s2}
state t2_test3 {n2 s2}
state t2_exit {n2 s2}
trans s1_init -> s1_test1
trans s1_test1 -> s1_body1
trans s1_body1 -> s1_inc1
trans s1_inc1 -> s1_test2
trans s1_test2 -> s1_exit
trans s1_exit -> s1_exit
trans s2_init -> s2_test1
trans s2_test1 -> s2_body1
trans s2_body1 -> s2_inc1
trans s2_inc1 -> s2_test2
trans s2_test2 -> s2_body2
trans s2_body2 -> s2_inc2
trans s2_inc2 -> s2_test3
trans s2_test3 -> s2_exit
trans s2_exit -> s2_exit
trans t1_init -> t1_peel
trans t1_peel -> t1_inc1
trans t1_inc1 -> t1_test2
trans t1_test2 -> t1_exit
trans t1_exit -> t1_exit
trans t2_init -> t2_peel
trans t2_peel -> t2_inc1
trans t2_inc1 -> t2_test2
trans t2_test2 -> t2_body2
trans t2_body2 -> t2_inc2
trans t2_inc2 -> t2_test3
trans t2_test3 -> t2_exit
trans t2_exit -> t2_exit
)corpus"},
    {"dbe.kr", R"corpus(# Dead branch elimination.
#   source: y := in; if (y != y) { z := 1; } z := y;
#   target: y := in; z := y;
aps: in y z
init: s_in1 s_in0 t_in1 t_in0
state s_in1 {in}
state s_y1 {in y}
state s_dead1 {in y}
state s_z1 {in y z}
state s_in0 {}
state s_y0 {}
state s_dead0 {}
state s_z0 {}
state t_in1 {in}
state t_y1 {in y}
state t_z1 {in y z}
state t_in0 {}
state t_y0 {}
state t_z0 {}
trans s_in1 -> s_y1
trans s_y1 -> s_dead1
trans s_dead1 -> s_z1
trans s_z1 -> s_z1
trans s_in0 -> s_y0
trans s_y0 -> s_dead0
trans s_dead0 -> s_z0
trans s_z0 -> s_z0
trans t_in1 -> t_y1
trans t_y1 -> t_z1
trans t_z1 -> t_z1
trans t_in0 -> t_y0
trans t_y0 -> t_z0
trans t_z0 -> t_z0
)corpus"},
    {"ef.kr", R"corpus(# Expression flattening over input bits a and b; y2 and y4 hold when y is 2 and 4.
#   source: y := (a + b) * 2;
#   target: t := a + b; y := t * 2;
aps: a b y2 y4
init: s_00 s_01 s_10 s_11 t_00 t_01 t_10 t_11
state s_00 {}
state s_00_y {}
state s_01 {b}
state s_01_y {b y2}
state s_10 {a}
state s_10_y {a y2}
state s_11 {a b}
state s_11_y {a b y4}
state t_00 {}
state t_00_t {}
state t_00_y {}
state t_01 {b}
state t_01_t {b}
state t_01_y {b y2}
state t_10 {a}
state t_10_t {a}
state t_10_y {a y2}
state t_11 {a b}
state t_11_t {a b}
state t_11_y {a b y4}
trans s_00 -> s_00_y
trans s_00_y -> s_00_y
trans s_01 -> s_01_y
trans s_01_y -> s_01_y
trans s_10 -> s_10_y
trans s_10_y -> s_10_y
trans s_11 -> s_11_y
trans s_11_y -> s_11_y
trans t_00 -> t_00_t
trans t_00_t -> t_00_y
trans t_00_y -> t_00_y
trans t_01 -> t_01_t
trans t_01_t -> t_01_y
trans t_01_y -> t_01_y
trans t_10 -> t_10_t
trans t_10_t -> t_10_y
trans t_10_y -> t_10_y
trans t_11 -> t_11_t
trans t_11_t -> t_11_y
trans t_11_y -> t_11_y
)corpus"},
    {"spi_correct.kr", R"corpus(# SPI secondary holding one input bit. The main selects it once (ss is active low and is never
# released), then drives sclk and writes mosi on rising edges; every state may also stay put,
# which models the secondary's own faster clock. On each falling edge the secondary puts its
# bit on miso. obs abbreviates miso & !sclk & !ss.
# State names: i<in>_<d|s><sclk><mosi>_<stage>, d = deselected, s = selected, stage 1 after the
# first falling edge.
aps: in ss sclk mosi miso obs
init: i0_d00_0 i1_d00_0
state i0_d00_0 {ss}
state i1_d00_0 {in ss}
state i0_s00_0 {}
state i1_s00_0 {in}
state i0_s10_0 {sclk}
state i0_s11_0 {sclk mosi}
state i1_s10_0 {in sclk}
state i1_s11_0 {in sclk mosi}
state i0_s00_1 {}
state i0_s01_1 {mosi}
state i1_s00_1 {in miso obs}
state i1_s01_1 {in mosi miso obs}
state i0_s10_1 {sclk}
state i0_s11_1 {sclk mosi}
state i1_s10_1 {in sclk miso}
state i1_s11_1 {in sclk mosi miso}
trans i0_d00_0 -> i0_d00_0
trans i0_d00_0 -> i0_s00_0
trans i1_d00_0 -> i1_d00_0
trans i1_d00_0 -> i1_s00_0
trans i0_s00_0 -> i0_s00_0
trans i0_s00_0 -> i0_s10_0
trans i0_s00_0 -> i0_s11_0
trans i1_s00_0 -> i1_s00_0
trans i1_s00_0 -> i1_s10_0
trans i1_s00_0 -> i1_s11_0
trans i0_s10_0 -> i0_s10_0
trans i0_s10_0 -> i0_s00_1
trans i0_s11_0 -> i0_s11_0
trans i0_s11_0 -> i0_s01_1
trans i1_s10_0 -> i1_s10_0
trans i1_s10_0 -> i1_s00_1
trans i1_s11_0 -> i1_s11_0
trans i1_s11_0 -> i1_s01_1
trans i0_s00_1 -> i0_s00_1
trans i0_s00_1 -> i0_s10_1
trans i0_s00_1 -> i0_s11_1
trans i0_s01_1 -> i0_s01_1
trans i0_s01_1 -> i0_s10_1
trans i0_s01_1 -> i0_s11_1
trans i1_s00_1 -> i1_s00_1
trans i1_s00_1 -> i1_s10_1
trans i1_s00_1 -> i1_s11_1
trans i1_s01_1 -> i1_s01_1
trans i1_s01_1 -> i1_s10_1
trans i1_s01_1 -> i1_s11_1
trans i0_s10_1 -> i0_s10_1
trans i0_s10_1 -> i0_s00_1
trans i0_s11_1 -> i0_s11_1
trans i0_s11_1 -> i0_s01_1
trans i1_s10_1 -> i1_s10_1
trans i1_s10_1 -> i1_s00_1
trans i1_s11_1 -> i1_s11_1
trans i1_s11_1 -> i1_s01_1
)corpus"},
    {"spi_term.kr", R"corpus(# SPI secondary that sends its bit only once: after the first falling edge miso carries the bit,
# after the second the transfer is over, term is raised and val records the bit that was sent.
# The main behaves as in spi_correct.kr. State names: i<in>_<d|s><sclk><mosi>_<stage>, with
# stage 2 once term holds.
aps: in ss sclk mosi miso term val
init: i0_d00_0 i1_d00_0
state i0_d00_0 {ss}
state i1_d00_0 {in ss}
state i0_s00_0 {}
state i1_s00_0 {in}
state i0_s10_0 {sclk}
state i0_s11_0 {sclk mosi}
state i1_s10_0 {in sclk}
state i1_s11_0 {in sclk mosi}
state i0_s00_1 {}
state i0_s01_1 {mosi}
state i1_s00_1 {in miso}
state i1_s01_1 {in mosi miso}
state i0_s10_1 {sclk}
state i0_s11_1 {sclk mosi}
state i1_s10_1 {in sclk miso}
state i1_s11_1 {in sclk mosi miso}
state i0_s00_2 {term}
state i0_s01_2 {mosi term}
state i1_s00_2 {in term val}
state i1_s01_2 {in mosi term val}
state i0_s10_2 {sclk term}
state i0_s11_2 {sclk mosi term}
state i1_s10_2 {in sclk term val}
state i1_s11_2 {in sclk mosi term val}
trans i0_d00_0 -> i0_d00_0
trans i0_d00_0 -> i0_s00_0
trans i1_d00_0 -> i1_d00_0
trans i1_d00_0 -> i1_s00_0
trans i0_s00_0 -> i0_s00_0
trans i0_s00_0 -> i0_s10_0
trans i0_s00_0 -> i0_s11_0
trans i1_s00_0 -> i1_s00_0
trans i1_s00_0 -> i1_s10_0
trans i1_s00_0 -> i1_s11_0
trans i0_s10_0 -> i0_s10_0
trans i0_s10_0 -> i0_s00_1
trans i0_s11_0 -> i0_s11_0
trans i0_s11_0 -> i0_s01_1
trans i1_s10_0 -> i1_s10_0
trans i1_s10_0 -> i1_s00_1
trans i1_s11_0 -> i1_s11_0
trans i1_s11_0 -> i1_s01_1
trans i0_s00_1 -> i0_s00_1
trans i0_s00_1 -> i0_s10_1
trans i0_s00_1 -> i0_s11_1
trans i0_s01_1 -> i0_s01_1
trans i0_s01_1 -> i0_s10_1
trans i0_s01_1 -> i0_s11_1
trans i1_s00_1 -> i1_s00_1
trans i1_s00_1 -> i1_s10_1
trans i1_s00_1 -> i1_s11_1
trans i1_s01_1 -> i1_s01_1
trans i1_s01_1 -> i1_s10_1
trans i1_s01_1 -> i1_s11_1
trans i0_s10_1 -> i0_s10_1
trans i0_s10_1 -> i0_s00_2
trans i0_s11_1 -> i0_s11_1
trans i0_s11_1 -> i0_s01_2
trans i1_s10_1 -> i1_s10_1
trans i1_s10_1 -> i1_s00_2
trans i1_s11_1 -> i1_s11_1
trans i1_s11_1 -> i1_s01_2
trans i0_s00_2 -> i0_s00_2
trans i0_s00_2 -> i0_s10_2
trans i0_s00_2 -> i0_s11_2
trans i0_s01_2 -> i0_s01_2
trans i0_s01_2 -> i0_s10_2
trans i0_s01_2 -> i0_s11_2
trans i1_s00_2 -> i1_s00_2
trans i1_s00_2 -> i1_s10_2
trans i1_s00_2 -> i1_s11_2
trans i1_s01_2 -> i1_s01_2
trans i1_s01_2 -> i1_s10_2
trans i1_s01_2 -> i1_s11_2
trans i0_s10_2 -> i0_s10_2
trans i0_s10_2 -> i0_s00_2
trans i0_s11_2 -> i0_s11_2
trans i0_s11_2 -> i0_s01_2
trans i1_s10_2 -> i1_s10_2
trans i1_s10_2 -> i1_s00_2
trans i1_s11_2 -> i1_s11_2
trans i1_s11_2 -> i1_s01_2
)corpus"},
    {"od.ahltl", R"corpus(forall p. forall q. E (li[p] <-> li[q]) -> G ((l0[p] <-> l0[q]) & (l1[p] <-> l1[q]))
)corpus"},
    {"selfloop.ahltl", R"corpus(forall p. forall q. E (b[p] <-> b[q]) U G (a[p] <-> a[q])
)corpus"},
    {"lnz.ahltl", R"corpus(forall p. exists q. E G (history[p] <-> history[q])
)corpus"},
    {"gmni.ahltl", R"corpus(forall p. exists q. E G lambda[q] & G (lo[p] <-> lo[q])
)corpus"},
    {"tin.ahltl", R"corpus(forall p. forall q. E (l[p] <-> l[q]) -> (G !term[p] | G !term[q] | F (term[p] & term[q] & (l[p] <-> l[q])))
)corpus"},
    {"tsn.ahltl", R"corpus(forall p. forall q. E (l[p] <-> l[q]) -> ((G !term[p] & G !term[q]) | F (term[p] & term[q] & (l[p] <-> l[q])))
)corpus"},
    {"cbf.ahltl", R"corpus(forall p. forall q. E (x[p] <-> x[q]) -> G ((y[p] <-> y[q]) & (a[p] <-> a[q]))
)corpus"},
    {"lp.ahltl", R"corpus(forall p. forall q. E (n2[p] <-> n2[q]) -> G ((s1[p] <-> s1[q]) & (s2[p] <-> s2[q]))
)corpus"},
    {"dbe.ahltl", R"corpus(forall p. forall q. E (in[p] <-> in[q]) -> G ((y[p] <-> y[q]) & (z[p] <-> z[q]))
)corpus"},
    {"ef.ahltl", R"corpus(forall p. forall q. E ((a[p] <-> a[q]) & (b[p] <-> b[q])) -> G ((y2[p] <-> y2[q]) & (y4[p] <-> y4[q]))
)corpus"},
    {"spi_correct.ahltl", R"corpus(forall p. forall q. E
  ((in[p] <-> in[q]) & G F sclk[p] & G F !sclk[p] & G F sclk[q] & G F !sclk[q])
  -> G (obs[p] <-> obs[q])
)corpus"},
    {"spi_term.ahltl", R"corpus(forall p. forall q. E
  ((in[p] <-> in[q]) & G F sclk[p] & G F !sclk[p] & G F sclk[q] & G F !sclk[q])
  -> G ((term[p] <-> term[q]) & (val[p] <-> val[q]))
)corpus"},
};

}  // namespace

const std::vector<CorpusFile>& corpus_files() { return kFiles; }

const std::string& corpus_text(std::string_view name) {
    auto it = std::find_if(kFiles.begin(), kFiles.end(), [&](const CorpusFile& f) { return f.name == name; });
    if (it == kFiles.end()) throw Error("no corpus file named '" + std::string(name) + "'");
    return it->text;
}

std::vector<Fixture> corpus_build() {
    struct Row {
        const char* name;
        const char* model;
        const char* formula;
        const char* expected;
        const char* note;
    };
    static const Row rows[] = {
        {"prog1", "prog1.kr", "od.ahltl", "HOLDS", "both runs change l at the same step"},
        {"prog2", "prog2.kr", "od.ahltl", "HOLDS", "the register step is absorbed by stuttering; lockstep reading FAILS"},
        {"selfloop", "selfloop.kr", "selfloop.ahltl", "FAILS",
         "not admissible; the pair (start sb^w, start sa^w) defeats every trajectory"},
        {"cbf", "cbf.kr", "cbf.ahltl", "HOLDS", "common branch factorization"},
        {"lp", "lp.kr", "lp.ahltl", "HOLDS", "loop peeling"},
        {"dbe", "dbe.kr", "dbe.ahltl", "HOLDS", "dead branch elimination"},
        {"ef", "ef.kr", "ef.ahltl", "HOLDS", "expression flattening"},
        {"spi_correct", "spi_correct.kr", "spi_correct.ahltl", "HOLDS", "miso agrees whenever selected and sclk is low"},
        {"spi_term", "spi_term.kr", "spi_term.ahltl", "HOLDS", "the single transfer ends with the same value"},
    };
    std::vector<Fixture> out;
    for (const Row& r : rows) {
        Fixture f;
        f.name = r.name;
        f.model_file = r.model;
        f.formula_file = r.formula;
        f.model = parse_kripke(corpus_text(r.model));
        f.formula = parse_formula(corpus_text(r.formula));
        f.expected = r.expected;
        f.note = r.note;
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace ahltl
