"""Multiagent PDDL domain texts for the benchmark domains.

Concurrency constraints are written as action atoms: ``(not (act ...))`` inside
``forall`` for exclusion, plain ``(act ...)`` for required co-occurrence, and
action atoms in ``when`` conditions where the outcome depends on what other
agents do at the same time.
"""

from __future__ import annotations

TABLEMOVER = """\
(define (domain tablemover)
  (:requirements :typing :negative-preconditions :conditional-effects :equality
                 :universal-preconditions :multi-agent)
  (:types room side - object
          locatable - object
          agent item - locatable
          block - item)
  (:constants Table - item)
  (:predicates (inroom ?x - locatable ?r - room)
               (at-side ?a - agent ?s - side)
               (handempty ?a - agent)
               (holding ?a - agent ?b - block)
               (on-floor ?b - block)
               (on-table ?b - block)
               (down ?s - side)
               (up ?s - side)
               (lifting ?a - agent ?s - side)
               (connected ?r1 ?r2 - room)
               (dropped))

  (:action to-table
   :agent ?a - agent
   :parameters (?r - room ?s - side)
   :precondition
     (and (inroom ?a ?r) (inroom Table ?r) (handempty ?a)
          (forall (?s2 - side) (not (at-side ?a ?s2)))
          (forall (?a2 - agent) (not (at-side ?a2 ?s)))
          (forall (?a2 - agent)
            (imply (not (= ?a2 ?a)) (not (to-table ?a2 ?r ?s)))))
   :effect (at-side ?a ?s))

  (:action leave-table
   :agent ?a - agent
   :parameters (?s - side)
   :precondition (and (at-side ?a ?s) (not (lifting ?a ?s)))
   :effect (not (at-side ?a ?s)))

  (:action move
   :agent ?a - agent
   :parameters (?r1 ?r2 - room)
   :precondition
     (and (inroom ?a ?r1) (connected ?r1 ?r2)
          (forall (?s - side) (not (at-side ?a ?s))))
   :effect (and (not (inroom ?a ?r1)) (inroom ?a ?r2)))

  (:action pickup-floor
   :agent ?a - agent
   :parameters (?b - block ?r - room)
   :precondition
     (and (inroom ?a ?r) (inroom ?b ?r) (on-floor ?b) (handempty ?a)
          (forall (?s - side) (not (at-side ?a ?s)))
          (forall (?a2 - agent)
            (imply (not (= ?a2 ?a)) (not (pickup-floor ?a2 ?b ?r)))))
   :effect (and (not (on-floor ?b)) (not (inroom ?b ?r))
                (not (handempty ?a)) (holding ?a ?b)))

  (:action putdown-floor
   :agent ?a - agent
   :parameters (?b - block ?r - room)
   :precondition (and (inroom ?a ?r) (holding ?a ?b))
   :effect (and (not (holding ?a ?b)) (handempty ?a)
                (on-floor ?b) (inroom ?b ?r)))

  (:action pickup-table
   :agent ?a - agent
   :parameters (?b - block ?r - room)
   :precondition
     (and (inroom ?a ?r) (inroom Table ?r) (on-table ?b) (handempty ?a)
          (forall (?s - side) (down ?s))
          (forall (?s - side) (not (at-side ?a ?s)))
          (forall (?a2 - agent ?s2 - side)
            (and (not (lift-side ?a2 ?s2)) (not (lower-side ?a2 ?s2))))
          (forall (?a2 - agent)
            (imply (not (= ?a2 ?a)) (not (pickup-table ?a2 ?b ?r)))))
   :effect (and (not (on-table ?b)) (not (handempty ?a)) (holding ?a ?b)))

  (:action putdown-table
   :agent ?a - agent
   :parameters (?b - block ?r - room)
   :precondition
     (and (inroom ?a ?r) (inroom Table ?r) (holding ?a ?b)
          (forall (?s - side) (down ?s))
          (forall (?a2 - agent ?s2 - side)
            (and (not (lift-side ?a2 ?s2)) (not (lower-side ?a2 ?s2)))))
   :effect (and (not (holding ?a ?b)) (handempty ?a) (on-table ?b)))

  (:action lift-side
   :agent ?a - agent
   :parameters (?s - side)
   :precondition
     (and (at-side ?a ?s)
          (down ?s) (handempty ?a)
          (forall (?a2 - agent ?s2 - side)
            (not (lower-side ?a2 ?s2))))
   :effect
     (and (not (down ?s)) (lifting ?a ?s)
          (up ?s) (not (handempty ?a))
          (forall (?b - block ?r - room ?s2 - side)
            (when
              (and (inroom Table ?r)
                   (on-table ?b) (down ?s2)
                   (forall (?a2 - agent)
                     (not (lift-side ?a2 ?s2))))
              (and (on-floor ?b) (inroom ?b ?r)
                   (not (on-table ?b)))))))

  (:action lower-side
   :agent ?a - agent
   :parameters (?s - side)
   :precondition
     (and (at-side ?a ?s) (lifting ?a ?s) (up ?s)
          (forall (?a2 - agent ?s2 - side)
            (not (lift-side ?a2 ?s2))))
   :effect
     (and (down ?s) (not (up ?s)) (not (lifting ?a ?s)) (handempty ?a)
          (forall (?b - block ?r - room ?s2 - side)
            (when
              (and (inroom Table ?r)
                   (on-table ?b) (up ?s2)
                   (forall (?a2 - agent)
                     (not (lower-side ?a2 ?s2))))
              (and (on-floor ?b) (inroom ?b ?r)
                   (not (on-table ?b)))))))

  (:action move-table
   :agent ?a - agent
   :parameters (?r1 ?r2 - room ?s - side)
   :precondition
     (and (lifting ?a ?s) (inroom ?a ?r1) (inroom Table ?r1) (connected ?r1 ?r2)
          (forall (?s2 - side) (up ?s2))
          (forall (?a2 - agent ?s2 - side)
            (and (not (lift-side ?a2 ?s2)) (not (lower-side ?a2 ?s2)))))
   :effect
     (and (not (inroom ?a ?r1)) (inroom ?a ?r2)
          (not (inroom Table ?r1)) (inroom Table ?r2)
          ;; anyone holding a side who does not come along drops the table
          (forall (?a2 - agent ?s2 - side)
            (when (and (not (= ?a2 ?a)) (lifting ?a2 ?s2)
                       (not (move-table ?a2 ?r1 ?r2 ?s2)))
              (dropped)))))
)
"""

MAZE = """\
(define (domain maze)
  (:requirements :typing :negative-preconditions :conditional-effects :equality
                 :universal-preconditions :multi-agent)
  (:types agent location door bridge boat - object)
  (:predicates (at ?a - agent ?l - location)
               (door-link ?d - door ?l1 ?l2 - location)
               (bridge-link ?b - bridge ?l1 ?l2 - location)
               (intact ?b - bridge)
               (boat-link ?bt - boat ?l1 ?l2 - location))

  ;; a door lets one agent through at a time
  (:action move-door
   :agent ?a - agent
   :parameters (?l1 ?l2 - location ?d - door)
   :precondition
     (and (at ?a ?l1) (door-link ?d ?l1 ?l2)
          (forall (?a2 - agent ?l3 ?l4 - location)
            (imply (and (not (= ?a2 ?a)) (door-link ?d ?l3 ?l4))
                   (not (move-door ?a2 ?l3 ?l4 ?d)))))
   :effect (and (not (at ?a ?l1)) (at ?a ?l2)))

  ;; any number of agents may cross together; the bridge collapses afterwards
  (:action cross-bridge
   :agent ?a - agent
   :parameters (?l1 ?l2 - location ?b - bridge)
   :precondition (and (at ?a ?l1) (bridge-link ?b ?l1 ?l2) (intact ?b))
   :effect (and (not (at ?a ?l1)) (at ?a ?l2) (not (intact ?b))))

  ;; rowing moves the agent only if someone else rows the same way
  (:action row
   :agent ?a - agent
   :parameters (?l1 ?l2 - location ?bt - boat)
   :precondition
     (and (at ?a ?l1) (boat-link ?bt ?l1 ?l2)
          (forall (?a2 - agent) (not (row ?a2 ?l2 ?l1 ?bt))))
   :effect
     (forall (?a2 - agent)
       (when (and (not (= ?a2 ?a)) (row ?a2 ?l1 ?l2 ?bt))
         (and (not (at ?a ?l1)) (at ?a ?l2)))))
)
"""

BOXPUSHING = """\
(define (domain boxpushing)
  (:requirements :typing :negative-preconditions :conditional-effects :equality
                 :universal-preconditions :multi-agent)
  (:types agent cell box - object)
  (:predicates (at ?a - agent ?c - cell)
               (box-at ?b - box ?c - cell)
               (adj ?c1 ?c2 - cell)
               (small ?b - box)
               (medium ?b - box)
               (large ?b - box))

  (:action move
   :agent ?a - agent
   :parameters (?c1 ?c2 - cell)
   :precondition (and (at ?a ?c1) (adj ?c1 ?c2))
   :effect (and (not (at ?a ?c1)) (at ?a ?c2)))

  (:action push-small
   :agent ?a - agent
   :parameters (?b - box ?c1 ?c2 - cell)
   :precondition
     (and (at ?a ?c1) (box-at ?b ?c1) (adj ?c1 ?c2) (small ?b)
          (forall (?a2 - agent ?c3 - cell)
            (imply (and (adj ?c1 ?c3) (not (= ?c3 ?c2)))
                   (not (push-small ?a2 ?b ?c1 ?c3)))))
   :effect (and (not (box-at ?b ?c1)) (box-at ?b ?c2)
                (not (at ?a ?c1)) (at ?a ?c2)))

  ;; two pushers needed; the box and the pushers move only if both push
  (:action push-medium
   :agent ?a - agent
   :parameters (?b - box ?c1 ?c2 - cell)
   :precondition
     (and (at ?a ?c1) (box-at ?b ?c1) (adj ?c1 ?c2) (medium ?b)
          (forall (?a2 - agent ?c3 - cell)
            (imply (and (adj ?c1 ?c3) (not (= ?c3 ?c2)))
                   (not (push-medium ?a2 ?b ?c1 ?c3)))))
   :effect
     (forall (?a2 - agent)
       (when (and (not (= ?a2 ?a)) (push-medium ?a2 ?b ?c1 ?c2))
         (and (not (box-at ?b ?c1)) (box-at ?b ?c2)
              (not (at ?a ?c1)) (at ?a ?c2)))))

  ;; three pushers needed
  (:action push-large
   :agent ?a - agent
   :parameters (?b - box ?c1 ?c2 - cell)
   :precondition
     (and (at ?a ?c1) (box-at ?b ?c1) (adj ?c1 ?c2) (large ?b)
          (forall (?a2 - agent ?c3 - cell)
            (imply (and (adj ?c1 ?c3) (not (= ?c3 ?c2)))
                   (not (push-large ?a2 ?b ?c1 ?c3)))))
   :effect
     (forall (?a2 ?a3 - agent)
       (when (and (not (= ?a2 ?a)) (not (= ?a3 ?a)) (not (= ?a2 ?a3))
                  (push-large ?a2 ?b ?c1 ?c2) (push-large ?a3 ?b ?c1 ?c2))
         (and (not (box-at ?b ?c1)) (box-at ?b ?c2)
              (not (at ?a ?c1)) (at ?a ?c2)))))
)
"""

WORKSHOP = """\
(define (domain workshop)
  (:requirements :typing :negative-preconditions :conditional-effects :equality
                 :universal-preconditions :multi-agent)
  (:types agent location door key forklift pallet - object)
  (:predicates (at ?a - agent ?l - location)
               (on-foot ?a - agent)
               (link ?l1 ?l2 - location ?d - door)
               (open ?d - door)
               (switch-at ?d - door ?l - location)
               (keyhole-at ?d - door ?l - location)
               (key-for ?k - key ?d - door)
               (key-at ?k - key ?l - location)
               (has-key ?a - agent ?k - key)
               (forklift-at ?f - forklift ?l - location)
               (in-forklift ?a - agent ?f - forklift)
               (empty ?f - forklift)
               (pallet-at ?p - pallet ?l - location)
               (inventoried ?p - pallet))

  (:action move
   :agent ?a - agent
   :parameters (?l1 ?l2 - location ?d - door)
   :precondition (and (at ?a ?l1) (on-foot ?a) (link ?l1 ?l2 ?d) (open ?d))
   :effect (and (not (at ?a ?l1)) (at ?a ?l2)))

  (:action pickup-key
   :agent ?a - agent
   :parameters (?k - key ?l - location)
   :precondition
     (and (at ?a ?l) (on-foot ?a) (key-at ?k ?l)
          (forall (?a2 - agent)
            (imply (not (= ?a2 ?a)) (not (pickup-key ?a2 ?k ?l)))))
   :effect (and (not (key-at ?k ?l)) (has-key ?a ?k)))

  (:action turn-key
   :agent ?a - agent
   :parameters (?d - door ?k - key ?l - location)
   :precondition
     (and (at ?a ?l) (on-foot ?a) (keyhole-at ?d ?l) (key-for ?k ?d) (has-key ?a ?k))
   :effect (and))

  ;; ?w names the agent turning the key at the same time
  (:action press-switch
   :agent ?a - agent
   :parameters (?d - door ?w - agent ?l - location)
   :precondition
     (and (at ?a ?l) (on-foot ?a) (switch-at ?d ?l) (not (= ?w ?a))
          (forall (?k - key ?l2 - location)
            (imply (and (key-for ?k ?d) (keyhole-at ?d ?l2))
                   (turn-key ?w ?d ?k ?l2))))
   :effect (open ?d))

  (:action enter-forklift
   :agent ?a - agent
   :parameters (?f - forklift ?l - location)
   :precondition
     (and (at ?a ?l) (on-foot ?a) (forklift-at ?f ?l) (empty ?f)
          (forall (?a2 - agent)
            (imply (not (= ?a2 ?a)) (not (enter-forklift ?a2 ?f ?l)))))
   :effect (and (not (on-foot ?a)) (not (empty ?f)) (in-forklift ?a ?f)))

  (:action exit-forklift
   :agent ?a - agent
   :parameters (?f - forklift)
   :precondition (in-forklift ?a ?f)
   :effect (and (on-foot ?a) (empty ?f) (not (in-forklift ?a ?f))))

  (:action drive
   :agent ?a - agent
   :parameters (?f - forklift ?l1 ?l2 - location ?d - door)
   :precondition
     (and (in-forklift ?a ?f) (at ?a ?l1) (forklift-at ?f ?l1) (link ?l1 ?l2 ?d) (open ?d))
   :effect (and (not (at ?a ?l1)) (at ?a ?l2)
                (not (forklift-at ?f ?l1)) (forklift-at ?f ?l2)))

  (:action lift-pallet
   :agent ?a - agent
   :parameters (?f - forklift ?p - pallet ?l - location)
   :precondition (and (in-forklift ?a ?f) (forklift-at ?f ?l) (pallet-at ?p ?l))
   :effect (and))

  ;; labels are under the pallet: ?w must lift it with a forklift meanwhile
  (:action examine
   :agent ?a - agent
   :parameters (?p - pallet ?w - agent ?f - forklift ?l - location)
   :precondition
     (and (at ?a ?l) (on-foot ?a) (pallet-at ?p ?l) (not (= ?w ?a))
          (lift-pallet ?w ?f ?p ?l))
   :effect (inventoried ?p))
)
"""

DOMAINS = {
    "tablemover": TABLEMOVER,
    "maze": MAZE,
    "maze-scaling": MAZE,
    "boxpushing": BOXPUSHING,
    "workshop": WORKSHOP,
}
