public class ItineraryAgencyController {
    public void assignAgency(Agency agency) {
        agencyStore.assign(agency);
    }
    public void exportAgency(Agency agency) {
        agencyStore.export(agency);
    }
    public void exportItinerary(Itinerary itinerary) {
        itineraryStore.export(itinerary);
    }
}
