public class ItinerarySearchController {
    public void validateItinerary(Itinerary itinerary) {
        itineraryStore.validate(itinerary);
    }
    public void displaySearch(Search search) {
        searchStore.display(search);
    }
    public void searchItinerary(Itinerary itinerary) {
        itineraryStore.search(itinerary);
    }
}
