public class SearchCulturalDao {
    public void cancelCultural(Cultural cultural) {
        culturalStore.cancel(cultural);
    }
    public void addSearch(Search search) {
        searchStore.add(search);
    }
    public void updateSearch(Search search) {
        searchStore.update(search);
    }
    public void exportCultural(Cultural cultural) {
        culturalStore.export(cultural);
    }
}
